//! Command implementations behind the `oddunitary` binary.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use oddunitary::{
    build_l, build_l_star, condition_d, condition_e, conj_l_to_transvection, conj_lstar_to_transvection,
    congruent_mod_lmax, factor_l, factor_l_star, force_condition_d, isometry_check, matrix, t_minus1,
    transvection_to_vaserstein, vaserstein_preimage, ConjugationKind, ConjugationResult, Descriptor, Error,
    Involution, Matrix, Report, Ring, Scalar, SpaceConfig, VVector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "oddunitary", version, about = "Vaserstein-type matrices in odd unitary groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance file: a space and a random v.
    Gen(GenArgs),
    /// Check the identities on an instance.
    Verify {
        #[arg(long = "in")]
        input: String,
        #[arg(long, value_enum, default_value_t = CheckKind::All)]
        check: CheckKind,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<String>,
    },
    /// Elementary words for L(v) and L(v)*.
    Factor {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Conjugate L(v), L(v)* to T_{-1}, T_1; with --reverse, map a
    /// transvection back to v.
    Conjugate {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        reverse: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the worked example over Z/5 with negation.
    Demo,
}

#[derive(clap::Args, Debug)]
pub struct GenArgs {
    /// integer, mod:K, gauss or gauss_mod:K
    #[arg(long)]
    pub ring: String,
    #[arg(long, value_enum)]
    pub involution: InvolutionArg,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// identity, skew-standard or file:<path>
    #[arg(long, default_value = "skew-standard")]
    pub phi: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Solve for a1 so that condition (D) holds.
    #[arg(long = "force-D")]
    pub force_d: bool,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionArg {
    Identity,
    Negation,
    #[value(name = "twist_i", alias = "twist-i")]
    TwistI,
}

impl From<InvolutionArg> for Involution {
    fn from(x: InvolutionArg) -> Involution {
        match x {
            InvolutionArg::Identity => Involution::Identity,
            InvolutionArg::Negation => Involution::Negation,
            InvolutionArg::TwistI => Involution::TwistI,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    All,
    Isometry,
    Congruence,
    Conditions,
    Factorization,
    Conjugation,
}

/// Failure of a command, with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses arguments, runs the command, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Gen(args) => {
            let instance = cmd_gen(&args)?;
            emit(out, args.out.as_deref(), &instance)?;
            Ok(EXIT_PASS)
        }
        Command::Verify { input, check, out: path } => {
            let instance = Instance::load(&input)?;
            let report = cmd_verify(&instance, check)?;
            write!(out, "{report}").map_err(io_error)?;
            if let Some(p) = path {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                fs::write(&p, text + "\n").map_err(io_error)?;
            }
            Ok(if report.all_passed() { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Factor { input, out: path } => {
            let instance = Instance::load(&input)?;
            emit(out, path.as_deref(), &cmd_factor(&instance)?)?;
            Ok(EXIT_PASS)
        }
        Command::Conjugate { input, reverse, out: path } => {
            let value = if reverse {
                cmd_conjugate_reverse(&read_json(&input)?)?
            } else {
                cmd_conjugate(&Instance::load(&input)?)?
            };
            emit(out, path.as_deref(), &value)?;
            Ok(EXIT_PASS)
        }
        Command::Demo => {
            let report = cmd_demo()?;
            write!(out, "{report}").map_err(io_error)?;
            Ok(if report.all_passed() { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
    }
}

fn io_error(e: std::io::Error) -> CliError {
    usage(format!("i/o: {e}"))
}

fn emit(out: &mut dyn Write, path: Option<&str>, value: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("json serializes") + "\n";
    match path {
        Some(p) => fs::write(p, text).map_err(io_error),
        None => out.write_all(text.as_bytes()).map_err(io_error),
    }
}

fn read_json(path: &str) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("parse error in {path}: {e}")))
}

/// `integer`, `mod:K`, `gauss`, `gauss_mod:K`.
pub fn parse_ring(text: &str, involution: Involution) -> CliResult<Ring> {
    let modulus = |k: &str| {
        k.parse::<u64>()
            .map_err(|_| usage(format!("bad modulus in ring {text:?}")))
    };
    let descriptor = match text.split_once(':') {
        None if text == "integer" => Descriptor::Integer,
        None if text == "gauss" => Descriptor::GaussInteger,
        Some(("mod", k)) => Descriptor::Mod(modulus(k)?.into()),
        Some(("gauss_mod", k)) => Descriptor::GaussMod(modulus(k)?.into()),
        _ => return Err(usage(format!("unknown ring {text:?}"))),
    };
    Ok(Ring::new(descriptor, involution)?)
}

fn build_space(ring: &Ring, m: usize, n: usize, phi: &str) -> CliResult<SpaceConfig> {
    match phi {
        "identity" => Ok(SpaceConfig::with_identity_phi(ring, m, n)?),
        "skew-standard" => Ok(SpaceConfig::with_skew_standard_phi(ring, m, n)?),
        other => {
            let path = other
                .strip_prefix("file:")
                .ok_or_else(|| usage(format!("unknown phi flag {other:?}")))?;
            let v = read_json(path)?;
            let rows = |key: &str| -> CliResult<Matrix> {
                let rows = matrix::rows_from_json(ring, v.get(key).unwrap_or(&Value::Null))?;
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidPhi(format!("\"{key}\" in {path} must be {n} x {n}")).into());
                }
                Ok(Matrix::from_rows(ring, rows).unwrap_or_else(|_| Matrix::zeros(ring, 0, 0)))
            };
            Ok(SpaceConfig::new(ring, m, rows("phi")?, rows("phi_inv")?)?)
        }
    }
}

/// A space, an optional `v`, and the seed that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub cfg: SpaceConfig,
    pub v: Option<Vec<Scalar>>,
    pub seed: Option<u64>,
}

impl Instance {
    pub fn to_json(&self) -> Value {
        let mut out = json!({ "cfg": self.cfg.to_json() });
        if let Some(v) = &self.v {
            out["v"] = matrix::vector_to_json(self.cfg.ring(), v);
        }
        if let Some(s) = self.seed {
            out["seed"] = json!(s);
        }
        out
    }

    pub fn from_json(value: &Value) -> CliResult<Instance> {
        let cfg = SpaceConfig::from_json(value.get("cfg").unwrap_or(&Value::Null))?;
        let v = match value.get("v") {
            None | Some(Value::Null) => None,
            Some(raw) => Some(VVector::from_json(&cfg, &json!({ "v": raw }))?.a),
        };
        let seed = value.get("seed").and_then(Value::as_u64);
        Ok(Instance { cfg, v, seed })
    }

    pub fn load(path: &str) -> CliResult<Instance> {
        Instance::from_json(&read_json(path)?)
    }

    fn require_v(&self) -> CliResult<&[Scalar]> {
        self.v.as_deref().ok_or_else(|| usage("instance has no \"v\""))
    }
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<Value> {
    let ring = parse_ring(&args.ring, args.involution.into())?;
    let cfg = build_space(&ring, args.m, args.n, &args.phi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut v = oddunitary::vaserstein::sample_v(&cfg, &mut rng);
    if args.force_d {
        v = force_condition_d(&cfg, &v[1..])?;
    }
    Ok(Instance {
        cfg,
        v: Some(v),
        seed: Some(args.seed),
    }
    .to_json())
}

fn implication(report: &mut Report, name: &str, premise: bool, conclusion: bool) {
    let detail = format!("premise={premise}, conclusion={conclusion}");
    report.push(name, !premise || conclusion, Some(detail));
}

pub fn cmd_verify(instance: &Instance, check: CheckKind) -> CliResult<Report> {
    let cfg = &instance.cfg;
    let v = instance.require_v()?;
    let ring = cfg.ring();
    let fmt_v = |x: &[Scalar]| x.iter().map(|s| ring.format(s)).collect::<Vec<_>>().join(",");
    let mut report = Report::new(format!(
        "verify over {ring}, m={}, n={}, v=({})",
        cfg.m(),
        cfg.n(),
        fmt_v(v)
    ));
    let l = build_l(cfg, v)?;
    let ls = build_l_star(cfg, v)?;
    let d = condition_d(cfg, v)?;
    let e = condition_e(cfg, v)?;
    let wants = |k: CheckKind| check == CheckKind::All || check == k;

    if wants(CheckKind::Conditions) {
        report.push("condition_D", d, Some(format!("condition_D={d}")));
        report.note(format!("condition_E={e}"));
    }
    if wants(CheckKind::Isometry) {
        implication(&mut report, "condition_D => isometry(L)", d, isometry_check(cfg, &l)?);
        implication(&mut report, "condition_E => isometry(L*)", e, isometry_check(cfg, &ls)?);
    }
    if wants(CheckKind::Congruence) {
        implication(&mut report, "condition_D => congruent(L)", d, congruent_mod_lmax(cfg, &l)?);
        let cong = congruent_mod_lmax(cfg, &ls)?;
        report.note(format!("condition_E={e}, congruent(L*)={cong}"));
    }
    if wants(CheckKind::Factorization) {
        let bound = 5 * (cfg.dim() - 1);
        for (name, word, target) in [("L", factor_l(cfg, v)?, &l), ("L*", factor_l_star(cfg, v)?, &ls)] {
            let ok = word.product() == *target;
            report.push(format!("word_product(factor {name}) = {name}"), ok, None);
            report.push(
                format!("factor {name} length <= {bound}"),
                word.len() <= bound,
                Some(format!("length {}", word.len())),
            );
        }
    }
    if wants(CheckKind::Conjugation) {
        let p = cfg.change_of_basis();
        report.push("P P^t = I", p.mul(&p.transpose())?.is_identity(), None);
        for (name, conj, target) in [
            ("L", conj_l_to_transvection(cfg, v)?, &l),
            ("L*", conj_lstar_to_transvection(cfg, v)?, &ls),
        ] {
            let lhs = cfg.matrix_to_module_first(target)?;
            let rhs = conj.matrix(cfg)?;
            let eq = lhs == rhs;
            report.push(
                format!("P^t {name} P = {}(u, a)", conj.kind.name()),
                eq,
                (!eq).then(|| format!("lhs={lhs}, rhs={rhs}")),
            );
            let back = vaserstein_preimage(cfg, conj.kind, &conj.u, &conj.a)?;
            report.push(format!("preimage of {name} conjugate = v"), back == v, None);
            let (cond, premise) = match conj.kind {
                ConjugationKind::TMinus1 => ("D", d),
                ConjugationKind::TPlus1 => ("E", e),
            };
            implication(
                &mut report,
                &format!("condition_{cond} => {name} witness in L_max"),
                premise,
                conj.witness_in_l_max(cfg)?,
            );
        }
    }
    Ok(report)
}

pub fn cmd_factor(instance: &Instance) -> CliResult<Value> {
    let cfg = &instance.cfg;
    let v = instance.require_v()?;
    Ok(json!({
        "L": factor_l(cfg, v)?.to_json(),
        "L_star": factor_l_star(cfg, v)?.to_json(),
    }))
}

pub fn cmd_conjugate(instance: &Instance) -> CliResult<Value> {
    let cfg = &instance.cfg;
    let v = instance.require_v()?;
    Ok(json!({
        "L": conj_l_to_transvection(cfg, v)?.to_json(cfg),
        "L_star": conj_lstar_to_transvection(cfg, v)?.to_json(cfg),
    }))
}

/// Input `{"cfg": …, "transvection": {"kind", "u", "a"}}`; output `{"v": …}`.
pub fn cmd_conjugate_reverse(value: &Value) -> CliResult<Value> {
    let cfg = SpaceConfig::from_json(value.get("cfg").unwrap_or(&Value::Null))?;
    let t = ConjugationResult::from_json(&cfg, value.get("transvection").unwrap_or(&Value::Null))?;
    let w = transvection_to_vaserstein(&cfg, t.kind, &t.u, &t.a)?;
    Ok(w.to_json(&cfg))
}

/// The Z/5 negation example: `m = 1`, `n = 2`, `φ = I`, `v = (0, 1, 2)`.
pub fn cmd_demo() -> CliResult<Report> {
    let ring = Ring::modular(5, Involution::Negation)?;
    let cfg = SpaceConfig::with_identity_phi(&ring, 1, 2)?;
    let v: Vec<Scalar> = [0, 1, 2].iter().map(|&x| ring.int(x)).collect();
    let mut report = Report::new("demo over Z/5 with negation, m=1, n=2, phi=I, v=(0,1,2)");

    let l = build_l(&cfg, &v)?;
    report.note(format!("L(v) = {l}"));
    let word = factor_l(&cfg, &v)?;
    let factors: Vec<String> = word
        .factors()
        .iter()
        .map(|f| format!("E({},{};{})", f.i, f.j, ring.format(&f.r)))
        .collect();
    report.note(format!("factor_L(v) = {}", factors.join(" ")));
    report.push("word_product(factor_L(v)) = L(v)", word.product() == l, None);
    report.push("condition_D(v)", condition_d(&cfg, &v)?, None);
    report.push("isometry(L(v))", isometry_check(&cfg, &l)?, None);
    report.push("congruent(L(v))", congruent_mod_lmax(&cfg, &l)?, None);

    let conj = cfg.matrix_to_module_first(&l)?;
    report.note(format!("P^t L(v) P = {conj}"));
    let c = conj_l_to_transvection(&cfg, &v)?;
    let t = t_minus1(&cfg, &c.u, &c.a)?;
    let fmt = |x: &[Scalar]| x.iter().map(|s| ring.format(s)).collect::<Vec<_>>().join(",");
    report.note(format!(
        "t_minus1(u=({}), a={}) = {t}",
        fmt(&c.u),
        ring.format(&c.a)
    ));
    report.push("P^t L(v) P = t_minus1(u1, a1)", conj == t, None);
    report.push("witness in L_max", c.witness_in_l_max(&cfg)?, None);
    let back = transvection_to_vaserstein(&cfg, c.kind, &c.u, &c.a)?;
    report.note(format!("transvection_to_vaserstein = ({})", fmt(&back.a)));
    report.push("round trip recovers v", back.a == v, None);
    Ok(report)
}

/// Writes an instance file; convenience for tests.
pub fn write_instance(path: &Path, instance: &Instance) -> std::io::Result<()> {
    fs::write(path, serde_json::to_string_pretty(&instance.to_json()).expect("json") + "\n")
}
