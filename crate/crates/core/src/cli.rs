//! The `qwalk` command line.
//!
//! Exit codes: `0` success or a positive verdict, `1` a negative verdict
//! (invalid walk, not Szegedy, deviation above tolerance), `2` bad input.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angle::Angle;
use crate::canonical::{factor_shift_coin, general_to_type, SiteUnitaryFamily};
use crate::error::{Error, Result};
use crate::evolve::{trajectory, verify_equivalence_distributions, State};
use crate::format::{emit_certificate, emit_family, emit_walk, parse_family, parse_walk, parse_walk_unchecked};
use crate::linalg::C64;
use crate::szegedy::{eta_criterion, solve, verify_certificate};
use crate::walk::{Extension, TypedClass, WalkSpec, VALIDATION_TOL};
use crate::zoo::{self, HalfCoin, RandomForm};

pub const DEFAULT_EQUIV_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Discrete-time quantum walks on the line")]
pub struct RunConfig {
    /// Tolerance override; QWALK_TOL is read when the flag is absent.
    #[arg(long, global = true, env = "QWALK_TOL")]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check unitarity and basis conditions site by site.
    Validate { spec: PathBuf },

    /// Convert to a typed layout; writes the walk and the intertwiner W.
    Canonicalize {
        spec: PathBuf,
        #[arg(long, value_enum)]
        to: ClassArg,
        /// Walk output; W goes next to it as `<stem>.w.json`.
        #[arg(long)]
        emit: Option<PathBuf>,
    },

    /// Shift-coin factorization U = S T.
    Factor {
        spec: PathBuf,
        /// Where to write the coin family T.
        #[arg(long)]
        emit: Option<PathBuf>,
    },

    /// Decide whether the walk is a Szegedy walk.
    SzegedyCheck {
        spec: PathBuf,
        /// Where to write the certificate; printed to stdout otherwise.
        #[arg(long)]
        emit: Option<PathBuf>,
    },

    /// Evolve a state and print the distribution at every step as CSV.
    Simulate {
        spec: PathBuf,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        init: InitialArg,
        /// Add the amplitude columns re1,im1,re2,im2.
        #[arg(long)]
        amplitudes: bool,
    },

    /// Compare distributions of (U, ψ) and (W U W*, W ψ).
    EquivVerify {
        spec: PathBuf,
        /// Family file, or `identity`.
        family: String,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[command(flatten)]
        init: InitialArg,
    },

    /// Write a walk from the model zoo.
    Model(ModelArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InitialArg {
    /// `site:re1,im1,re2,im2`, normalized on load.
    #[arg(long, allow_hyphen_values = true)]
    pub initial: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    C1,
    C2,
    C3,
    C4,
}

impl From<ClassArg> for TypedClass {
    fn from(c: ClassArg) -> TypedClass {
        match c {
            ClassArg::C1 => TypedClass::C1,
            ClassArg::C2 => TypedClass::C2,
            ClassArg::C3 => TypedClass::C3,
            ClassArg::C4 => TypedClass::C4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Hadamard,
    TwoCoin,
    KitagawaA,
    KitagawaB,
    ShikanoKatsura,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(value_enum)]
    pub name: ModelName,
    /// `lo,hi`
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub emit: Option<PathBuf>,
    /// random and kitagawa without --omega: ChaCha8 seed, default 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// two-coin: `r,sigma,nu,mu` for sites n ≥ 0.
    #[arg(long, allow_hyphen_values = true)]
    pub plus: Option<String>,
    /// two-coin: `r,sigma,nu,mu` for sites n < 0.
    #[arg(long, allow_hyphen_values = true)]
    pub minus: Option<String>,
    /// kitagawa: comma-separated phases, one per window site.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// kitagawa: linear phases ωₙ = n·eta.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// shikano-katsura: rational `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// random: c1..c4 or general.
    #[arg(long)]
    pub form: Option<String>,
    /// random: periodic[:p], constant-tails or window-only.
    #[arg(long)]
    pub extension: Option<String>,
}

/// Parses arguments and runs; clap usage errors exit with 2.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => dispatch(&cfg, out, err),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            code
        }
    }
}

pub fn dispatch(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cfg, out) {
        Ok(code) => code,
        // reader went away, as with `| head`
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    if let Some(t) = cfg.tol {
        if !(t > 0.0 && t <= 1e-3) {
            return Err(Error::InvalidSpec(format!("tolerance must lie in (0, 1e-3], got {t}")));
        }
    }
    match &cfg.command {
        Command::Validate { spec } => {
            let w = parse_walk_unchecked(&read(spec)?)?;
            let report = w.validate_with_tol(cfg.tol.unwrap_or(VALIDATION_TOL));
            let (lo, hi) = w.window();
            let form = w.class().map(|k| k.to_string()).unwrap_or_else(|| "general".into());
            writeln!(out, "form {form}, window [{lo}, {hi}], extension {}", describe(w.extension()))?;
            write!(out, "{report}")?;
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::Canonicalize { spec, to, emit } => {
            let w = load(spec)?;
            let (typed, family) = general_to_type(&w, (*to).into())?;
            match emit {
                Some(path) => {
                    let w_path = family_path(path);
                    fs::write(path, emit_walk(&typed))?;
                    fs::write(&w_path, emit_family(&family))?;
                    writeln!(out, "wrote {} and {}", path.display(), w_path.display())?;
                }
                None => out.write_all(emit_walk(&typed).as_bytes())?,
            }
            Ok(0)
        }
        Command::Factor { spec, emit } => {
            let w = load(spec)?;
            let f = factor_shift_coin(&w)?;
            let (lo, hi) = w.window();
            writeln!(out, "shift edges {}..{}, coins on [{lo}, {hi}]", lo, hi)?;
            match f.residuals(&w) {
                Ok(r) => writeln!(
                    out,
                    "residuals: S-S* {}, S^2-I {}, ST-U {}",
                    sci(r.self_adjoint),
                    sci(r.involution),
                    sci(r.reconstruction)
                )?,
                Err(Error::UnsupportedBoundary) => writeln!(out, "residuals: need a periodic extension")?,
                Err(e) => return Err(e),
            }
            if let Some(path) = emit {
                fs::write(path, emit_family(&f.coins))?;
            }
            Ok(0)
        }
        Command::SzegedyCheck { spec, emit } => szegedy_check(&load(spec)?, emit.as_deref(), out),
        Command::Simulate {
            spec,
            steps,
            init,
            amplitudes,
        } => {
            let w = load(spec)?;
            let psi0 = initial_state(init, &w)?;
            let states = trajectory(&w, &psi0, *steps)?;
            write_csv(out, &states, *amplitudes)?;
            Ok(0)
        }
        Command::EquivVerify {
            spec,
            family,
            steps,
            init,
        } => {
            let w = load(spec)?;
            let fam = if family == "identity" {
                SiteUnitaryFamily::identity(w.window())
            } else {
                parse_family(&read(Path::new(family))?)?
            };
            let psi0 = initial_state(init, &w)?;
            let dev = verify_equivalence_distributions(&w, &fam, &psi0, *steps)?;
            let tol = cfg.tol.unwrap_or(DEFAULT_EQUIV_TOL);
            writeln!(out, "max deviation over {steps} steps: {}", sci(dev))?;
            Ok(if dev < tol { 0 } else { 1 })
        }
        Command::Model(args) => {
            let w = build_model(args)?;
            let text = emit_walk(&w);
            match &args.emit {
                Some(path) => fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
    }
}

fn szegedy_check(w: &WalkSpec, emit: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let cert = solve(w)?;
    let eta = match eta_criterion(w) {
        Ok(e) => Some(e),
        Err(Error::EmptyLambda) => None,
        Err(e) => return Err(e),
    };
    if let Some(e) = &eta {
        if e.is_some() != cert.is_some() {
            return Err(Error::InvalidSpec("λ and η criteria disagree".into()));
        }
    }
    let Some(cert) = cert else {
        writeln!(out, "not a Szegedy walk")?;
        writeln!(out, "λ: no solution")?;
        writeln!(out, "η: no solution")?;
        return Ok(1);
    };
    let report = verify_certificate(w, &cert);
    if !report.passed {
        write!(out, "{report}")?;
        return Err(Error::InvalidSpec("certificate failed verification".into()));
    }
    writeln!(out, "Szegedy walk")?;
    writeln!(out, "λ = {} (mod π)", cert.lambda)?;
    match eta {
        Some(Some(e)) => writeln!(out, "η = {e} (mod π)")?,
        _ => writeln!(out, "η: undefined, no site with r ≠ 0")?,
    }
    writeln!(out, "certificate verified, max residual {}", sci(report.max_residual()))?;
    let json = emit_certificate(&cert);
    match emit {
        Some(path) => fs::write(path, json)?,
        None => out.write_all(json.as_bytes())?,
    }
    Ok(0)
}

fn read(path: &Path) -> Result<String> {
    fs::read(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
        .and_then(|b| String::from_utf8(b).map_err(|e| Error::Parse(format!("{}: not UTF-8: {e}", path.display()))))
}

fn load(path: &Path) -> Result<WalkSpec> {
    parse_walk(&read(path)?)
}

fn family_path(spec: &Path) -> PathBuf {
    let name = spec.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = name.strip_suffix(".json").unwrap_or(&name);
    spec.with_file_name(format!("{stem}.w.json"))
}

fn describe(ext: Extension) -> String {
    match ext {
        Extension::Periodic(p) => format!("periodic({p})"),
        Extension::ConstantTails => "constant tails".into(),
        Extension::WindowOnly => "window only".into(),
    }
}

/// C-style `%.12e`: `2.500000000000e-01`.
pub fn sci(x: f64) -> String {
    let s = format!("{x:.12e}");
    match s.split_once('e') {
        Some((mant, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mant}e{sign}{:02}", e.abs())
        }
        None => s,
    }
}

fn write_csv(out: &mut dyn Write, states: &[State], amplitudes: bool) -> Result<()> {
    if amplitudes {
        writeln!(out, "t,site,prob,re1,im1,re2,im2")?;
    } else {
        writeln!(out, "t,site,prob")?;
    }
    for (t, psi) in states.iter().enumerate() {
        for (n, v) in psi.amplitudes() {
            let p = v.norm_squared();
            if amplitudes {
                writeln!(
                    out,
                    "{t},{n},{},{},{},{},{}",
                    sci(p),
                    sci(v[0].re),
                    sci(v[0].im),
                    sci(v[1].re),
                    sci(v[1].im)
                )?;
            } else {
                writeln!(out, "{t},{n},{}", sci(p))?;
            }
        }
    }
    Ok(())
}

fn initial_state(init: &InitialArg, w: &WalkSpec) -> Result<State> {
    match &init.initial {
        Some(s) => parse_initial(s),
        None => {
            let (lo, hi) = w.window();
            let site = if (lo..=hi).contains(&0) { 0 } else { lo };
            State::localized(site, C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        }
    }
}

/// `site:re1,im1,re2,im2`.
pub fn parse_initial(s: &str) -> Result<State> {
    let bad = || Error::InvalidState(format!("expected site:re1,im1,re2,im2, got {s:?}"));
    let (site, amps) = s.split_once(':').ok_or_else(bad)?;
    let site: i64 = site.trim().parse().map_err(|_| bad())?;
    let v: Vec<f64> = amps
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    if v.len() != 4 || v.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    State::localized(site, C64::new(v[0], v[1]), C64::new(v[2], v[3]))
}

/// `pi`, `-pi/2`, `3pi/4`, `3/4pi`, `2pi` or plain radians.
pub fn parse_angle(s: &str) -> Result<Angle> {
    let t = s.trim().replace('π', "pi");
    let bad = || Error::InvalidSpec(format!("cannot read angle {s:?}"));
    let Some(pos) = t.find("pi") else {
        let x: f64 = t.parse().map_err(|_| bad())?;
        return if x.is_finite() { Ok(Angle::rad(x)) } else { Err(bad()) };
    };
    let rest = format!("{}{}", &t[..pos], &t[pos + 2..]);
    let (num, den) = match rest.split_once('/') {
        Some((n, d)) => (n.to_string(), d.parse::<i64>().map_err(|_| bad())?),
        None => (rest.clone(), 1),
    };
    let num = match num.trim() {
        "" | "+" => 1,
        "-" => -1,
        n => n.parse::<i64>().map_err(|_| bad())?,
    };
    if den <= 0 {
        return Err(bad());
    }
    Ok(Angle::pi_frac(num, den))
}

fn parse_window(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidSpec(format!("expected window lo,hi, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let lo: i64 = a.trim().parse().map_err(|_| bad())?;
    let hi: i64 = b.trim().parse().map_err(|_| bad())?;
    if hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn parse_half(s: &str) -> Result<HalfCoin> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::InvalidSpec(format!("expected r,sigma,nu,mu, got {s:?}")));
    }
    let r: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidSpec(format!("bad r in {s:?}")))?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidSpec(format!("r must lie in [0, 1], got {r}")));
    }
    Ok(HalfCoin::unitary(r, parse_angle(parts[1])?, parse_angle(parts[2])?, parse_angle(parts[3])?))
}

fn parse_extension(s: &str) -> Result<Extension> {
    match s {
        "periodic" => Ok(Extension::Periodic(1)),
        "constant-tails" => Ok(Extension::ConstantTails),
        "window-only" => Ok(Extension::WindowOnly),
        other => match other.strip_prefix("periodic:").map(str::parse::<usize>) {
            Some(Ok(p)) if p > 0 => Ok(Extension::Periodic(p)),
            _ => Err(Error::InvalidSpec(format!("unknown extension {s:?}"))),
        },
    }
}

fn build_model(args: &ModelArgs) -> Result<WalkSpec> {
    let window = |default: (i64, i64)| -> Result<(i64, i64)> {
        args.window.as_deref().map(parse_window).unwrap_or(Ok(default))
    };
    match args.name {
        ModelName::Hadamard => Ok(zoo::hadamard_on(window(zoo::HADAMARD_WINDOW)?)),
        ModelName::TwoCoin => {
            let default = HalfCoin::unitary(FRAC_1_SQRT_2, Angle::ZERO, Angle::ZERO, Angle::ZERO);
            let plus = args.plus.as_deref().map(parse_half).transpose()?.unwrap_or(default);
            let minus = args.minus.as_deref().map(parse_half).transpose()?.unwrap_or(default);
            zoo::two_coin(plus, minus, window((-4, 3))?)
        }
        ModelName::KitagawaA | ModelName::KitagawaB => {
            let (omega, lo) = match &args.omega {
                Some(list) => {
                    let omega = list.split(',').map(parse_angle).collect::<Result<Vec<_>>>()?;
                    let lo = window((0, omega.len() as i64 - 1))?.0;
                    (omega, lo)
                }
                None => {
                    let (lo, hi) = window((0, 7))?;
                    let omega = match &args.eta {
                        Some(e) => {
                            let eta = parse_angle(e)?;
                            (lo..=hi).map(|n| eta.scale(n)).collect()
                        }
                        None => {
                            let mut rng = ChaCha8Rng::seed_from_u64(args.seed.unwrap_or(0));
                            (lo..=hi).map(|_| Angle::rad(rng.random::<f64>() * 2.0 * PI)).collect()
                        }
                    };
                    (omega, lo)
                }
            };
            if args.name == ModelName::KitagawaA {
                zoo::kitagawa_a(&omega, lo)
            } else {
                zoo::kitagawa_b(&omega, lo)
            }
        }
        ModelName::ShikanoKatsura => {
            let alpha = match args.alpha.as_deref() {
                Some(s) => parse_ratio(s)?,
                None => Ratio::new(1, 3),
            };
            zoo::shikano_katsura(alpha, window((-6, 5))?)
        }
        ModelName::Random => {
            let form = match args.form.as_deref().unwrap_or("general") {
                "general" => RandomForm::General,
                "c1" | "C1" => RandomForm::Typed(TypedClass::C1),
                "c2" | "C2" => RandomForm::Typed(TypedClass::C2),
                "c3" | "C3" => RandomForm::Typed(TypedClass::C3),
                "c4" | "C4" => RandomForm::Typed(TypedClass::C4),
                other => return Err(Error::InvalidSpec(format!("unknown form {other:?}"))),
            };
            let ext = parse_extension(args.extension.as_deref().unwrap_or("periodic"))?;
            zoo::random_walk(args.seed.unwrap_or(0), window((-4, 4))?, form, ext)
        }
    }
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::InvalidSpec(format!("expected a rational p/q, got {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(p, q))
}
