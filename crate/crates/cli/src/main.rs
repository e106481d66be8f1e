//! Command-line driver: field construction, polynomial operations, Gabidulin
//! codec runs, and instrumented benchmarks.
//!
//! Payloads travel as JSON lines on stdin/stdout (or via `--input`), field
//! elements as their packed decimal values, so invocations compose in
//! pipelines. Randomized commands take `--seed` and default to a fixed one.

use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use linpoly::fastmul::{sp_mul_fast, MatBackend};
use linpoly::field::{FieldCtx, OpTally};
use linpoly::gabidulin::{
    channel, decode_error_erasure, decode_errors, DecodeResult, ErasureInfo, ErasureInfoRepr,
    GabidulinCode,
};
use linpoly::interp::interpolate;
use linpoly::leea::right_leea;
use linpoly::qtransform::{qt_forward, qt_inverse, QTContext};
use linpoly::skewpoly::{SkewPoly, SkewPolyRepr};
use linpoly::subspace::{mpe_general, msp};
use linpoly::Error as LinError;

#[derive(Parser)]
#[command(name = "linpoly", about = "Linearized polynomial arithmetic and Gabidulin codecs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Prime base field order.
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 8)]
    m: usize,
    /// Modulus digits c_0,...,c_m (monic); scanned deterministically if absent.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendKind {
    Naive,
    Strassen,
}

#[derive(Args, Clone)]
struct IoArgs {
    /// Read JSON lines from this file instead of stdin.
    #[arg(long)]
    input: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Field context construction and basis machinery.
    Field {
        #[command(subcommand)]
        op: FieldOp,
    },
    /// Skew/linearized polynomial operations on JSON-line payloads.
    Poly {
        #[command(subcommand)]
        op: PolyOp,
    },
    /// Gabidulin encoding, decoding and channel simulation.
    Gab {
        #[command(subcommand)]
        op: GabOp,
    },
    /// Seeded micro-benchmarks; emits CSV `s,muls,adds,nanos`.
    Bench {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(value_enum)]
        target: BenchTarget,
        /// Problem sizes.
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value_t = BackendKind::Naive)]
        backend: BackendKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum FieldOp {
    /// Build and print the field context.
    Make {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Find a normal element.
    Normal {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Normal element together with its dual.
    Dual {
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Subcommand)]
enum PolyOp {
    /// Schoolbook product of two polynomials (two input lines).
    MulNaive {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = false)]
        count_ops: bool,
    },
    /// Fragmentation product; coefficient-identical to mul-naive.
    MulFast {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_enum, default_value_t = BackendKind::Strassen)]
        backend: BackendKind,
        #[arg(long, default_value_t = false)]
        count_ops: bool,
    },
    /// Right division a = quo·b + rem (two input lines: a, b).
    Rdiv {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Left division a = b·quo + rem (two input lines: a, b).
    Ldiv {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Forward q-transform (one input line).
    Qt {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
        /// Block length s dividing m; defaults to m.
        #[arg(long)]
        block_s: Option<usize>,
    },
    /// Inverse q-transform (one input line).
    Iqt {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        block_s: Option<usize>,
    },
    /// Minimal subspace polynomial of a point list (one line: [v, ...]).
    Msp {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Multi-point evaluation (line 1: polynomial, line 2: [v, ...]).
    Mpe {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Interpolation of pairs (one line: [[x, y], ...]).
    Interp {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Right LEEA with stopping degree (two input lines: a, b).
    Leea {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        d_stop: i64,
    },
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Code length; locators default to the normal ladder β^{[0..n)}.
    #[arg(long)]
    n: usize,
    /// Code dimension.
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand)]
enum GabOp {
    /// Encode a message polynomial (one line) into a codeword array.
    Encode {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Error-only decoding of a received word (one line: [v, ...]).
    Decode {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Error-erasure decoding (line 1: word, line 2: {"a_R":[..],"B_C":[[..]]}).
    DecodeEe {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Apply the seeded error/erasure channel to a codeword (one line).
    Channel {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 0)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        rho: usize,
        #[arg(long, default_value_t = 0)]
        gamma: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchTarget {
    Mul,
    Msp,
    Mpe,
    Interp,
    Decode,
}

enum CliError {
    /// Module-level failure: exit code 1.
    Module(String),
    /// Malformed input: exit code 2.
    Input(String),
}

impl From<LinError> for CliError {
    fn from(e: LinError) -> Self {
        CliError::Module(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Module(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn make_ctx(args: &FieldArgs) -> CliResult<FieldCtx> {
    match &args.modulus {
        Some(digits) => Ok(FieldCtx::with_modulus(args.q, args.m, digits)?),
        None => Ok(FieldCtx::new(args.q, args.m)?),
    }
}

fn make_backend(kind: BackendKind) -> MatBackend {
    match kind {
        BackendKind::Naive => MatBackend::naive(),
        BackendKind::Strassen => MatBackend::strassen(),
    }
}

fn read_payload_lines(io: &IoArgs, expected: usize) -> CliResult<Vec<String>> {
    let raw = match &io.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .lock()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    let lines: Vec<String> = raw
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect();
    if lines.len() < expected {
        return Err(CliError::Input(format!(
            "expected {expected} JSON line(s), got {}",
            lines.len()
        )));
    }
    Ok(lines)
}

fn parse_poly(ctx: &FieldCtx, line: &str) -> CliResult<SkewPoly> {
    let repr: SkewPolyRepr =
        serde_json::from_str(line).map_err(|e| CliError::Input(format!("bad polynomial: {e}")))?;
    SkewPoly::from_repr(ctx, &repr).map_err(|e| CliError::Input(format!("bad polynomial: {e}")))
}

fn parse_values(ctx: &FieldCtx, line: &str) -> CliResult<Vec<linpoly::FieldElement>> {
    let vals: Vec<u64> =
        serde_json::from_str(line).map_err(|e| CliError::Input(format!("bad value array: {e}")))?;
    vals.iter()
        .map(|&v| {
            ctx.from_value(v)
                .map_err(|e| CliError::Input(format!("value {v} out of range: {e}")))
        })
        .collect()
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn word_values(word: &[linpoly::FieldElement]) -> Vec<u64> {
    word.iter().map(|x| x.value()).collect()
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Field { op } => run_field(op),
        Command::Poly { op } => run_poly(op),
        Command::Gab { op } => run_gab(op),
        Command::Bench {
            field,
            target,
            sizes,
            backend,
            seed,
        } => run_bench(&field, target, &sizes, backend, seed),
    }
}

fn run_field(op: FieldOp) -> CliResult<()> {
    match op {
        FieldOp::Make { field } => {
            let ctx = make_ctx(&field)?;
            print_json(&ctx.params());
        }
        FieldOp::Normal { field } => {
            let ctx = make_ctx(&field)?;
            let spec = ctx.params();
            print_json(&json!({
                "q": spec.q, "m": spec.m, "modulus": spec.modulus,
                "beta": ctx.normal_element().value(),
            }));
        }
        FieldOp::Dual { field } => {
            let ctx = make_ctx(&field)?;
            let spec = ctx.params();
            print_json(&json!({
                "q": spec.q, "m": spec.m, "modulus": spec.modulus,
                "beta": ctx.normal_element().value(),
                "dual": ctx.dual_normal_element().value(),
            }));
        }
    }
    Ok(())
}

fn run_poly(op: PolyOp) -> CliResult<()> {
    match op {
        PolyOp::MulNaive { field, io, count_ops } => {
            let ctx = make_ctx(&field)?;
            let lines = read_payload_lines(&io, 2)?;
            let a = parse_poly(&ctx, &lines[0])?;
            let b = parse_poly(&ctx, &lines[1])?;
            compat(&a, &b)?;
            let before = ctx.op_tally();
            let c = a.mul_naive(&b, &ctx);
            emit_poly_with_ops(&c, count_ops.then(|| ctx.op_tally() - before));
        }
        PolyOp::MulFast {
            field,
            io,
            backend,
            count_ops,
        } => {
            let ctx = make_ctx(&field)?;
            let lines = read_payload_lines(&io, 2)?;
            let a = parse_poly(&ctx, &lines[0])?;
            let b = parse_poly(&ctx, &lines[1])?;
            compat(&a, &b)?;
            let before = ctx.op_tally();
            let c = sp_mul_fast(&a, &b, &ctx, &make_backend(backend))?;
            emit_poly_with_ops(&c, count_ops.then(|| ctx.op_tally() - before));
        }
        PolyOp::Rdiv { field, io } => {
            let ctx = make_ctx(&field)?;
            let lines = read_payload_lines(&io, 2)?;
            let a = parse_poly(&ctx, &lines[0])?;
            let b = parse_poly(&ctx, &lines[1])?;
            compat(&a, &b)?;
            let (quo, rem) = a.rdiv(&b, &ctx)?;
            print_json(&json!({"quo": quo.repr(), "rem": rem.repr()}));
        }
        PolyOp::Ldiv { field, io } => {
            let ctx = make_ctx(&field)?;
            let lines = read_payload_lines(&io, 2)?;
            let a = parse_poly(&ctx, &lines[0])?;
            let b = parse_poly(&ctx, &lines[1])?;
            compat(&a, &b)?;
            let (quo, rem) = a.ldiv(&b, &ctx)?;
            print_json(&json!({"quo": quo.repr(), "rem": rem.repr()}));
        }
        PolyOp::Qt { field, io, block_s } => {
            let ctx = make_ctx(&field)?;
            let qt = QTContext::new(&ctx, block_s.unwrap_or(ctx.m()))?;
            let lines = read_payload_lines(&io, 1)?;
            let a = parse_poly(&ctx, &lines[0])?;
            print_json(&qt_forward(&ctx, &qt, &a)?.repr());
        }
        PolyOp::Iqt { field, io, block_s } => {
            let ctx = make_ctx(&field)?;
            let qt = QTContext::new(&ctx, block_s.unwrap_or(ctx.m()))?;
            let lines = read_payload_lines(&io, 1)?;
            let a = parse_poly(&ctx, &lines[0])?;
            print_json(&qt_inverse(&ctx, &qt, &a)?.repr());
        }
        PolyOp::Msp { field, io } => {
            let ctx = make_ctx(&field)?;
            let lines = read_payload_lines(&io, 1)?;
            let points = parse_values(&ctx, &lines[0])?;
            print_json(&msp(&ctx, &points)?.repr());
        }
        PolyOp::Mpe { field, io } => {
            let ctx = make_ctx(&field)?;
            let lines = read_payload_lines(&io, 2)?;
            let a = parse_poly(&ctx, &lines[0])?;
            let points = parse_values(&ctx, &lines[1])?;
            let values = mpe_general(&ctx, &a, &points)?;
            print_json(&word_values(&values));
        }
        PolyOp::Interp { field, io } => {
            let ctx = make_ctx(&field)?;
            let lines = read_payload_lines(&io, 1)?;
            let raw: Vec<(u64, u64)> = serde_json::from_str(&lines[0])
                .map_err(|e| CliError::Input(format!("bad pair array: {e}")))?;
            let pairs = raw
                .iter()
                .map(|&(x, y)| {
                    Ok((
                        ctx.from_value(x)
                            .map_err(|e| CliError::Input(e.to_string()))?,
                        ctx.from_value(y)
                            .map_err(|e| CliError::Input(e.to_string()))?,
                    ))
                })
                .collect::<CliResult<Vec<_>>>()?;
            print_json(&interpolate(&ctx, &pairs)?.repr());
        }
        PolyOp::Leea { field, io, d_stop } => {
            let ctx = make_ctx(&field)?;
            let lines = read_payload_lines(&io, 2)?;
            let a = parse_poly(&ctx, &lines[0])?;
            let b = parse_poly(&ctx, &lines[1])?;
            compat(&a, &b)?;
            let (r, u, v) = right_leea(&ctx, &a, &b, d_stop)?;
            print_json(&json!({"r": r.repr(), "u": u.repr(), "v": v.repr()}));
        }
    }
    Ok(())
}

fn compat(a: &SkewPoly, b: &SkewPoly) -> CliResult<()> {
    if a.ell() != b.ell() {
        return Err(CliError::Module(LinError::AutomorphismMismatch.to_string()));
    }
    Ok(())
}

fn emit_poly_with_ops(poly: &SkewPoly, ops: Option<OpTally>) {
    match ops {
        Some(tally) => print_json(&json!({
            "ell": poly.repr().ell,
            "coeffs": poly.repr().coeffs,
            "ops": {"muls": tally.muls, "adds": tally.adds},
        })),
        None => print_json(&poly.repr()),
    }
}

fn run_gab(op: GabOp) -> CliResult<()> {
    match op {
        GabOp::Encode { field, code, io } => {
            let ctx = make_ctx(&field)?;
            let gab = GabidulinCode::with_normal_basis(&ctx, code.n, code.k)?;
            let lines = read_payload_lines(&io, 1)?;
            let f = parse_poly(&ctx, &lines[0])?;
            let word = gab.encode(&ctx, &f)?;
            print_json(&word_values(&word));
        }
        GabOp::Decode { field, code, io } => {
            let ctx = make_ctx(&field)?;
            let gab = GabidulinCode::with_normal_basis(&ctx, code.n, code.k)?;
            let lines = read_payload_lines(&io, 1)?;
            let word = parse_values(&ctx, &lines[0])?;
            if word.len() != code.n {
                return Err(CliError::Input(format!(
                    "received word length {} does not match n = {}",
                    word.len(),
                    code.n
                )));
            }
            match decode_errors(&ctx, &gab, &word)? {
                DecodeResult::Decoded { f, lambda } => print_json(&json!({
                    "f": f.repr(),
                    "lambda": lambda.map(|l| l.repr()),
                })),
                DecodeResult::Failure => print_json(&json!({"failure": true})),
            }
        }
        GabOp::DecodeEe { field, code, io } => {
            let ctx = make_ctx(&field)?;
            let gab = GabidulinCode::with_normal_basis(&ctx, code.n, code.k)?;
            let lines = read_payload_lines(&io, 2)?;
            let word = parse_values(&ctx, &lines[0])?;
            let repr: ErasureInfoRepr = serde_json::from_str(&lines[1])
                .map_err(|e| CliError::Input(format!("bad erasure info: {e}")))?;
            let info = ErasureInfo::from_repr(&ctx, code.n, &repr)
                .map_err(|e| CliError::Input(e.to_string()))?;
            match decode_error_erasure(&ctx, &gab, &word, &info)? {
                DecodeResult::Decoded { f, .. } => print_json(&json!({"f": f.repr()})),
                DecodeResult::Failure => print_json(&json!({"failure": true})),
            }
        }
        GabOp::Channel {
            field,
            code,
            io,
            t,
            rho,
            gamma,
            seed,
        } => {
            let ctx = make_ctx(&field)?;
            // Validate the code parameters even though only n is used here.
            let _ = GabidulinCode::with_normal_basis(&ctx, code.n, code.k)?;
            let lines = read_payload_lines(&io, 1)?;
            let word = parse_values(&ctx, &lines[0])?;
            if word.len() != code.n {
                return Err(CliError::Input(format!(
                    "codeword length {} does not match n = {}",
                    word.len(),
                    code.n
                )));
            }
            let (received, info, error) = channel(&ctx, &word, t, rho, gamma, seed)?;
            let repr = info.repr();
            print_json(&json!({
                "r": word_values(&received),
                "a_R": repr.a_r,
                "B_C": repr.b_c,
                "e": word_values(&error),
            }));
        }
    }
    Ok(())
}

fn run_bench(
    field: &FieldArgs,
    target: BenchTarget,
    sizes: &[usize],
    backend: BackendKind,
    seed: u64,
) -> CliResult<()> {
    use rand::SeedableRng;
    let mut out = String::from("s,muls,adds,nanos\n");
    for &s in sizes {
        let ctx = make_ctx(field)?;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed ^ s as u64);
        let random_poly = |ctx: &FieldCtx, deg: usize, rng: &mut rand_chacha::ChaCha12Rng| {
            let coeffs = (0..=deg).map(|_| ctx.random_element(rng)).collect();
            SkewPoly::new(ctx, 1, coeffs)
        };
        let before = ctx.op_tally();
        let start = Instant::now();
        match target {
            BenchTarget::Mul => {
                let a = random_poly(&ctx, s, &mut rng);
                let b = random_poly(&ctx, s, &mut rng);
                let _ = sp_mul_fast(&a, &b, &ctx, &make_backend(backend))?;
            }
            BenchTarget::Msp => {
                let points: Vec<_> = (0..s.max(1)).map(|_| ctx.random_element(&mut rng)).collect();
                let _ = msp(&ctx, &points)?;
            }
            BenchTarget::Mpe => {
                let a = random_poly(&ctx, s, &mut rng);
                let points: Vec<_> = (0..s.max(1)).map(|_| ctx.random_element(&mut rng)).collect();
                let _ = mpe_general(&ctx, &a, &points)?;
            }
            BenchTarget::Interp => {
                if s > ctx.m() {
                    return Err(CliError::Module(format!(
                        "interp size {s} exceeds extension degree {}",
                        ctx.m()
                    )));
                }
                let points = loop {
                    let pts: Vec<_> =
                        (0..s.max(1)).map(|_| ctx.random_element(&mut rng)).collect();
                    if linpoly::subspace::fq_rank(&ctx, &pts) == pts.len() {
                        break pts;
                    }
                };
                let pairs: Vec<_> = points
                    .iter()
                    .map(|&x| (x, ctx.random_element(&mut rng)))
                    .collect();
                let _ = interpolate(&ctx, &pairs)?;
            }
            BenchTarget::Decode => {
                if s > ctx.m() || s < 2 {
                    return Err(CliError::Module(format!(
                        "decode size {s} must satisfy 2 <= n <= m = {}",
                        ctx.m()
                    )));
                }
                let k = (s / 2).max(1);
                let gab = GabidulinCode::with_normal_basis(&ctx, s, k)?;
                let f = random_poly(&ctx, k - 1, &mut rng);
                let word = gab.encode(&ctx, &f)?;
                let (received, _, _) = channel(&ctx, &word, gab.radius(), 0, 0, seed)?;
                let _ = decode_errors(&ctx, &gab, &received)?;
            }
        }
        let nanos = start.elapsed().as_nanos();
        let tally = ctx.op_tally() - before;
        writeln!(out, "{s},{},{},{nanos}", tally.muls, tally.adds).expect("string write");
    }
    print!("{out}");
    Ok(())
}
