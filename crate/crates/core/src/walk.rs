//! Walks on the line: coins, site vectors and extensions.
//!
//! Every site carries the two-dimensional space `Hₙ = C²` with canonical basis
//! `e₁ⁿ, e₂ⁿ`. A walk moves amplitude only between neighbouring sites, so it is
//! determined by the blocks `U_{n−1,n}` and `U_{n+1,n}`. Each block is a rank
//! one map `|ξ⟩⟨ζ|` between site spaces, and the full walk is described either
//! by those vectors directly ([`Form::General`]) or by a 2×2 coin per site in
//! one of four typed layouts ([`Form::Typed`]).
//!
//! Coin conventions for the typed layouts, with coin `[[a, b], [c, d]]`:
//!
//! * `C1`: `U_{n−1,n} = [[aₙ, bₙ], [0, 0]]`, `U_{n+1,n} = [[0, 0], [cₙ, dₙ]]`.
//! * `C3`: the rows swapped, `U_{n−1,n} = [[0, 0], [cₙ, dₙ]]`, `U_{n+1,n} = [[aₙ, bₙ], [0, 0]]`.
//! * `C2`: the coin at site `m` acts on arriving amplitude. The column
//!   `(a, c)` receives what arrives from `m + 1` in `e₁`, the column `(b, d)`
//!   what arrives from `m − 1` in `e₂`.
//! * `C4`: as `C2` with the columns swapped: `(b, d)` receives from `m + 1`
//!   in `e₂`, `(a, c)` from `m − 1` in `e₁`.
//!
//! With those conventions every typed walk with unitary coins is unitary, and
//! the vectors `ξ`, `ζ` at a site depend only on that site's coin.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{Angle, Modulus};
use crate::error::{Error, Result};
use crate::linalg::{
    dense_unitarity_residual, e1, e2, max_abs, orthonormality_residual, outer, singular_values,
    unitarity_residual, Dense, Ket, Op2, C64,
};

/// Tolerance targeted by constructors and used for the `r = 0` / `s = 0` cut.
pub const EXACT_TOL: f64 = 1e-12;
/// Residual threshold for accepting a walk as valid.
pub const VALIDATION_TOL: f64 = 1e-9;

/// A complex coin entry, optionally remembering an exact phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Amp {
    Cartesian(C64),
    Polar { mag: f64, arg: Angle },
}

impl Amp {
    pub fn new(re: f64, im: f64) -> Amp {
        Amp::Cartesian(C64::new(re, im))
    }

    pub fn real(re: f64) -> Amp {
        Amp::Cartesian(C64::new(re, 0.0))
    }

    /// `mag · e^{i·arg}`; a negative magnitude is folded into the phase.
    pub fn polar(mag: f64, arg: Angle) -> Amp {
        if mag < 0.0 {
            Amp::Polar {
                mag: -mag,
                arg: (arg + Angle::PI).normalize(Modulus::TwoPi),
            }
        } else {
            Amp::Polar {
                mag,
                arg: arg.normalize(Modulus::TwoPi),
            }
        }
    }

    pub fn value(&self) -> C64 {
        match self {
            Amp::Cartesian(z) => *z,
            Amp::Polar { mag, arg } => Complex64::from_polar(*mag, arg.radians()),
        }
    }

    pub fn modulus(&self) -> f64 {
        match self {
            Amp::Cartesian(z) => z.norm(),
            Amp::Polar { mag, .. } => *mag,
        }
    }

    /// Phase in `[0, 2π)`. Exact for polar entries with an exact argument and
    /// for Cartesian entries lying on an axis.
    pub fn phase(&self) -> Angle {
        match self {
            Amp::Polar { arg, .. } => arg.normalize(Modulus::TwoPi),
            Amp::Cartesian(z) => {
                if z.im == 0.0 && z.re > 0.0 {
                    Angle::ZERO
                } else if z.im == 0.0 && z.re < 0.0 {
                    Angle::PI
                } else if z.re == 0.0 && z.im > 0.0 {
                    Angle::HALF_PI
                } else if z.re == 0.0 && z.im < 0.0 {
                    Angle::pi_frac(3, 2)
                } else {
                    Angle::rad(z.arg()).normalize(Modulus::TwoPi)
                }
            }
        }
    }
}

impl From<C64> for Amp {
    fn from(z: C64) -> Amp {
        Amp::Cartesian(z)
    }
}

impl From<f64> for Amp {
    fn from(x: f64) -> Amp {
        Amp::real(x)
    }
}

/// A 2×2 coin `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coin2 {
    pub a: Amp,
    pub b: Amp,
    pub c: Amp,
    pub d: Amp,
}

impl Coin2 {
    pub fn new(a: impl Into<Amp>, b: impl Into<Amp>, c: impl Into<Amp>, d: impl Into<Amp>) -> Coin2 {
        Coin2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn from_matrix(m: &Op2) -> Coin2 {
        Coin2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
    }

    pub fn identity() -> Coin2 {
        Coin2::new(Amp::real(1.0), Amp::real(0.0), Amp::real(0.0), Amp::real(1.0))
    }

    pub fn swap() -> Coin2 {
        Coin2::new(Amp::real(0.0), Amp::real(1.0), Amp::real(1.0), Amp::real(0.0))
    }

    pub fn hadamard() -> Coin2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Coin2::new(Amp::real(h), Amp::real(h), Amp::real(h), Amp::real(-h))
    }

    pub fn matrix(&self) -> Op2 {
        Op2::new(self.a.value(), self.b.value(), self.c.value(), self.d.value())
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.matrix())
    }

    /// Largest entrywise difference between two coins.
    pub fn distance(&self, other: &Coin2) -> f64 {
        max_abs(&(self.matrix() - other.matrix()))
    }

    pub fn polar_form(&self) -> Result<PolarCoin> {
        self.polar_form_at(None)
    }

    pub(crate) fn polar_form_at(&self, site: Option<i64>) -> Result<PolarCoin> {
        let residual = self.unitarity_residual();
        if residual > VALIDATION_TOL {
            return Err(Error::NotUnitary { site, residual });
        }
        Ok(PolarCoin::decompose(self))
    }
}

/// Moduli and phases of a unitary coin:
/// `a = e^{iσ}s`, `b = e^{iν}r`, `c = e^{iμ}r`, `d = e^{iτ}s`, `det = e^{iδ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarCoin {
    pub s: f64,
    pub r: f64,
    pub sigma: Angle,
    pub nu: Angle,
    pub mu: Angle,
    pub tau: Angle,
    pub delta: Angle,
}

impl PolarCoin {
    fn decompose(coin: &Coin2) -> PolarCoin {
        let mut s = 0.5 * (coin.a.modulus() + coin.d.modulus());
        let mut r = 0.5 * (coin.b.modulus() + coin.c.modulus());
        let (mut sigma, mut tau) = (coin.a.phase(), coin.d.phase());
        let (mut mu, mut nu) = (coin.c.phase(), coin.b.phase());
        if r < EXACT_TOL {
            r = 0.0;
            mu = Angle::ZERO;
            nu = Angle::ZERO;
        }
        if s < EXACT_TOL {
            s = 0.0;
            sigma = Angle::ZERO;
            tau = Angle::ZERO;
        }
        let delta = if s > 0.0 && sigma.is_exact() && tau.is_exact() {
            sigma + tau
        } else if r > 0.0 && mu.is_exact() && nu.is_exact() {
            mu + nu + Angle::PI
        } else {
            Angle::rad(coin.matrix().determinant().arg())
        }
        .normalize(Modulus::TwoPi);
        PolarCoin {
            s,
            r,
            sigma,
            nu,
            mu,
            tau,
            delta,
        }
    }

    /// The unitary coin with `r = sin`, `s = cos` of some mixing angle and
    /// phases `σ, ν, μ`; `τ` is forced by unitarity to `μ + ν − σ + π`.
    pub fn unitary(r: f64, sigma: Angle, nu: Angle, mu: Angle) -> PolarCoin {
        let r = r.clamp(0.0, 1.0);
        let s = (1.0 - r * r).max(0.0).sqrt();
        let tau = (mu + nu - sigma + Angle::PI).normalize(Modulus::TwoPi);
        let coin = Coin2 {
            a: Amp::polar(s, sigma),
            b: Amp::polar(r, nu),
            c: Amp::polar(r, mu),
            d: Amp::polar(s, tau),
        };
        PolarCoin::decompose(&coin)
    }

    pub fn to_coin(&self) -> Coin2 {
        Coin2 {
            a: Amp::polar(self.s, self.sigma),
            b: Amp::polar(self.r, self.nu),
            c: Amp::polar(self.r, self.mu),
            d: Amp::polar(self.s, self.tau),
        }
    }

    pub fn is_constrained(&self) -> bool {
        self.r > EXACT_TOL
    }
}

/// Per-site vectors: `xi_plus = ξ_{n,n+1}`, `xi_minus = ξ_{n,n−1}` receive
/// amplitude arriving from `n + 1` and `n − 1`; `zeta_minus = ζ_{n−1,n}`,
/// `zeta_plus = ζ_{n+1,n}` select what leaves towards `n − 1` and `n + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiteBases {
    pub xi_plus: Ket,
    pub xi_minus: Ket,
    pub zeta_minus: Ket,
    pub zeta_plus: Ket,
}

impl SiteBases {
    pub fn xi_residual(&self) -> f64 {
        orthonormality_residual(&self.xi_plus, &self.xi_minus)
    }

    pub fn zeta_residual(&self) -> f64 {
        orthonormality_residual(&self.zeta_minus, &self.zeta_plus)
    }

    pub fn distance(&self, other: &SiteBases) -> f64 {
        [
            self.xi_plus - other.xi_plus,
            self.xi_minus - other.xi_minus,
            self.zeta_minus - other.zeta_minus,
            self.zeta_plus - other.zeta_plus,
        ]
        .iter()
        .flat_map(|v| v.iter().map(|z| z.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
    }

    /// Applies a site unitary to every vector.
    pub fn transformed(&self, w: &Op2) -> SiteBases {
        SiteBases {
            xi_plus: w * self.xi_plus,
            xi_minus: w * self.xi_minus,
            zeta_minus: w * self.zeta_minus,
            zeta_plus: w * self.zeta_plus,
        }
    }
}

/// Two `(row, col)` entries of a 2×2 block.
pub type ZeroPattern = [(usize, usize); 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypedClass {
    C1,
    C2,
    C3,
    C4,
}

impl TypedClass {
    pub const ALL: [TypedClass; 4] = [TypedClass::C1, TypedClass::C2, TypedClass::C3, TypedClass::C4];

    pub fn from_index(k: u8) -> Option<TypedClass> {
        match k {
            1 => Some(TypedClass::C1),
            2 => Some(TypedClass::C2),
            3 => Some(TypedClass::C3),
            4 => Some(TypedClass::C4),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            TypedClass::C1 => 1,
            TypedClass::C2 => 2,
            TypedClass::C3 => 3,
            TypedClass::C4 => 4,
        }
    }

    /// Site vectors of a typed coin.
    pub fn bases(self, coin: &Coin2) -> SiteBases {
        let m = coin.matrix();
        let row0 = Ket::new(m[(0, 0)].conj(), m[(0, 1)].conj());
        let row1 = Ket::new(m[(1, 0)].conj(), m[(1, 1)].conj());
        let col0 = Ket::new(m[(0, 0)], m[(1, 0)]);
        let col1 = Ket::new(m[(0, 1)], m[(1, 1)]);
        match self {
            TypedClass::C1 => SiteBases {
                xi_plus: e1(),
                xi_minus: e2(),
                zeta_minus: row0,
                zeta_plus: row1,
            },
            TypedClass::C2 => SiteBases {
                xi_plus: col0,
                xi_minus: col1,
                zeta_minus: e1(),
                zeta_plus: e2(),
            },
            TypedClass::C3 => SiteBases {
                xi_plus: e2(),
                xi_minus: e1(),
                zeta_minus: row1,
                zeta_plus: row0,
            },
            TypedClass::C4 => SiteBases {
                xi_plus: col1,
                xi_minus: col0,
                zeta_minus: e2(),
                zeta_plus: e1(),
            },
        }
    }

    /// Entries of `U_{n−1,n}` and `U_{n+1,n}` that vanish in this layout,
    /// as `(row, col)` pairs.
    pub fn zero_pattern(self) -> (ZeroPattern, ZeroPattern) {
        const TOP: ZeroPattern = [(0, 0), (0, 1)];
        const BOTTOM: ZeroPattern = [(1, 0), (1, 1)];
        const LEFT: ZeroPattern = [(0, 0), (1, 0)];
        const RIGHT: ZeroPattern = [(0, 1), (1, 1)];
        match self {
            TypedClass::C1 => (BOTTOM, TOP),
            TypedClass::C2 => (RIGHT, LEFT),
            TypedClass::C3 => (TOP, BOTTOM),
            TypedClass::C4 => (LEFT, RIGHT),
        }
    }
}

impl fmt::Display for TypedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index())
    }
}

/// How the finite window describes a walk on all of ℤ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// The window repeats; its sites additionally repeat with period `p`.
    Periodic(usize),
    /// Sites left of the window copy the leftmost site, right of it the rightmost.
    ConstantTails,
    /// Nothing outside the window is defined.
    WindowOnly,
}

impl Extension {
    /// Window offset holding the data for site `n`.
    pub fn locate(&self, n: i64, window: (i64, i64)) -> Option<usize> {
        let (lo, hi) = window;
        let len = hi - lo + 1;
        match self {
            Extension::Periodic(_) => Some((n - lo).rem_euclid(len) as usize),
            Extension::ConstantTails => Some((n.clamp(lo, hi) - lo) as usize),
            Extension::WindowOnly => (lo..=hi).contains(&n).then(|| (n - lo) as usize),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Form {
    General(Vec<SiteBases>),
    Typed(TypedClass, Vec<Coin2>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkSpec {
    form: Form,
    window: (i64, i64),
    extension: Extension,
}

impl WalkSpec {
    pub fn typed(class: TypedClass, n_min: i64, coins: Vec<Coin2>, extension: Extension) -> Result<WalkSpec> {
        WalkSpec::new(Form::Typed(class, coins), n_min, extension)
    }

    pub fn general(n_min: i64, sites: Vec<SiteBases>, extension: Extension) -> Result<WalkSpec> {
        WalkSpec::new(Form::General(sites), n_min, extension)
    }

    pub fn new(form: Form, n_min: i64, extension: Extension) -> Result<WalkSpec> {
        let len = match &form {
            Form::General(v) => v.len(),
            Form::Typed(_, v) => v.len(),
        };
        if len == 0 {
            return Err(Error::InvalidSpec("window is empty".into()));
        }
        if let Extension::Periodic(p) = extension {
            if p == 0 || len % p != 0 {
                return Err(Error::InvalidSpec(format!(
                    "period {p} does not divide window length {len}"
                )));
            }
        }
        Ok(WalkSpec {
            form,
            window: (n_min, n_min + len as i64 - 1),
            extension,
        })
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn len(&self) -> usize {
        (self.window.1 - self.window.0 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        self.window.0..=self.window.1
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    pub fn class(&self) -> Option<TypedClass> {
        match &self.form {
            Form::Typed(k, _) => Some(*k),
            Form::General(_) => None,
        }
    }

    pub fn locate(&self, n: i64) -> Option<usize> {
        self.extension.locate(n, self.window)
    }

    pub fn coin_at(&self, n: i64) -> Option<&Coin2> {
        match &self.form {
            Form::Typed(_, coins) => self.locate(n).map(|i| &coins[i]),
            Form::General(_) => None,
        }
    }

    pub fn bases_at(&self, n: i64) -> Option<SiteBases> {
        let i = self.locate(n)?;
        Some(match &self.form {
            Form::Typed(k, coins) => k.bases(&coins[i]),
            Form::General(sites) => sites[i],
        })
    }

    /// All window sites as general-form vectors.
    pub fn all_bases(&self) -> Vec<SiteBases> {
        self.sites().map(|n| self.bases_at(n).expect("window site")).collect()
    }

    /// `U_{n−1,n}`: the part of site `n` moving left.
    pub fn left_block(&self, n: i64) -> Option<Op2> {
        let here = self.bases_at(n)?;
        let there = self.bases_at(n - 1)?;
        Some(outer(&there.xi_plus, &here.zeta_minus))
    }

    /// `U_{n+1,n}`: the part of site `n` moving right.
    pub fn right_block(&self, n: i64) -> Option<Op2> {
        let here = self.bases_at(n)?;
        let there = self.bases_at(n + 1)?;
        Some(outer(&there.xi_minus, &here.zeta_plus))
    }

    pub fn to_general(&self) -> WalkSpec {
        WalkSpec {
            form: Form::General(self.all_bases()),
            window: self.window,
            extension: self.extension,
        }
    }

    pub fn with_extension(&self, extension: Extension) -> Result<WalkSpec> {
        WalkSpec::new(self.form.clone(), self.window.0, extension)
    }

    pub fn validate(&self) -> DiagnosticsReport {
        self.validate_with_tol(VALIDATION_TOL)
    }

    pub fn validate_with_tol(&self, tol: f64) -> DiagnosticsReport {
        let mut sites = Vec::with_capacity(self.len());
        let mut issues = Vec::new();
        for n in self.sites() {
            let mut diag = SiteDiagnostics {
                n,
                ..SiteDiagnostics::default()
            };
            match &self.form {
                Form::Typed(_, _) => {
                    let res = self.coin_at(n).expect("window site").unitarity_residual();
                    diag.unitarity = Some(res);
                    if !(res < tol) {
                        issues.push(Issue::NotUnitary { n, residual: res });
                    }
                }
                Form::General(_) => {
                    let b = self.bases_at(n).expect("window site");
                    let (xr, zr) = (b.xi_residual(), b.zeta_residual());
                    diag.xi_onb = Some(xr);
                    diag.zeta_onb = Some(zr);
                    if !(xr < tol) {
                        issues.push(Issue::NotOrthonormal { n, pair: "xi", residual: xr });
                    }
                    if !(zr < tol) {
                        issues.push(Issue::NotOrthonormal { n, pair: "zeta", residual: zr });
                    }
                }
            }
            for (label, block, slot) in [
                ("U(n-1,n)", self.left_block(n), &mut diag.left_rank),
                ("U(n+1,n)", self.right_block(n), &mut diag.right_rank),
            ] {
                if let Some(m) = block {
                    let (s1, s2) = singular_values(&m);
                    let res = if s1 < tol { 1.0 - s1 } else { s2 };
                    *slot = Some(res);
                    if !(res < tol) {
                        issues.push(Issue::RankDefect { n, block: label, residual: res });
                    }
                }
            }
            sites.push(diag);
        }
        if let Extension::Periodic(p) = self.extension {
            for (i, n) in self.sites().enumerate().skip(p) {
                let res = match &self.form {
                    Form::Typed(_, c) => c[i].distance(&c[i - p]),
                    Form::General(b) => b[i].distance(&b[i - p]),
                };
                if !(res < tol) {
                    issues.push(Issue::PeriodMismatch { n, period: p, residual: res });
                }
            }
        }
        let max_residual = sites
            .iter()
            .flat_map(|d| [d.unitarity, d.xi_onb, d.zeta_onb, d.left_rank, d.right_rank])
            .flatten()
            .fold(0.0, f64::max);
        DiagnosticsReport {
            ok: issues.is_empty(),
            sites,
            issues,
            max_residual,
        }
    }

    /// Validates and turns the first problem into an error.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.issues.first() {
            None => Ok(()),
            Some(Issue::NotUnitary { n, residual }) => Err(Error::NotUnitary {
                site: Some(*n),
                residual: *residual,
            }),
            Some(issue) => Err(Error::InvalidSpec(issue.to_string())),
        }
    }

    /// Dense matrix of the walk on the window closed into a ring.
    pub fn unitary_on_window(&self) -> Result<Dense> {
        if !matches!(self.extension, Extension::Periodic(_)) {
            return Err(Error::UnsupportedBoundary);
        }
        let n_min = self.window.0;
        let mut m = Dense::zeros(2 * self.len(), 2 * self.len());
        for n in self.sites() {
            let col = 2 * (n - n_min) as usize;
            let blocks = [
                (n - 1, self.left_block(n).expect("periodic lookup")),
                (n + 1, self.right_block(n).expect("periodic lookup")),
            ];
            for (target, block) in blocks {
                let row = 2 * self.locate(target).expect("periodic lookup");
                for i in 0..2 {
                    for j in 0..2 {
                        m[(row + i, col + j)] += block[(i, j)];
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Dense block-diagonal matrix of per-site operators.
pub fn block_diagonal(blocks: &[Op2]) -> Dense {
    let mut m = Dense::zeros(2 * blocks.len(), 2 * blocks.len());
    for (k, b) in blocks.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                m[(2 * k + i, 2 * k + j)] = b[(i, j)];
            }
        }
    }
    m
}

/// `‖M†M − I‖_max` of [`WalkSpec::unitary_on_window`].
pub fn window_unitarity_residual(w: &WalkSpec) -> Result<f64> {
    Ok(dense_unitarity_residual(&w.unitary_on_window()?))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SiteDiagnostics {
    pub n: i64,
    pub unitarity: Option<f64>,
    pub xi_onb: Option<f64>,
    pub zeta_onb: Option<f64>,
    pub left_rank: Option<f64>,
    pub right_rank: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Issue {
    NotUnitary { n: i64, residual: f64 },
    NotOrthonormal { n: i64, pair: &'static str, residual: f64 },
    RankDefect { n: i64, block: &'static str, residual: f64 },
    PeriodMismatch { n: i64, period: usize, residual: f64 },
}

impl Issue {
    pub fn site(&self) -> i64 {
        match self {
            Issue::NotUnitary { n, .. }
            | Issue::NotOrthonormal { n, .. }
            | Issue::RankDefect { n, .. }
            | Issue::PeriodMismatch { n, .. } => *n,
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::NotUnitary { n, residual } => {
                write!(f, "site {n}: coin not unitary (residual {residual:.3e})")
            }
            Issue::NotOrthonormal { n, pair, residual } => {
                write!(f, "site {n}: {pair} pair not orthonormal (residual {residual:.3e})")
            }
            Issue::RankDefect { n, block, residual } => {
                write!(f, "site {n}: block {block} is not rank one (residual {residual:.3e})")
            }
            Issue::PeriodMismatch { n, period, residual } => {
                write!(f, "site {n}: breaks period {period} (residual {residual:.3e})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsReport {
    pub ok: bool,
    pub sites: Vec<SiteDiagnostics>,
    pub issues: Vec<Issue>,
    pub max_residual: f64,
}

impl fmt::Display for DiagnosticsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status: {}", if self.ok { "ok" } else { "invalid" })?;
        writeln!(f, "sites: {}", self.sites.len())?;
        writeln!(f, "max residual: {:.3e}", self.max_residual)?;
        for issue in &self.issues {
            writeln!(f, "  {issue}")?;
        }
        Ok(())
    }
}
