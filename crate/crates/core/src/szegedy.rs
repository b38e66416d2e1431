//! Deciding whether a walk is a Szegedy walk.
//!
//! For a walk in the `C1` layout with coins
//! `[[e^{iσ}s, e^{iν}r], [e^{iμ}r, e^{iτ}s]]` and `det = e^{iδ}`, the walk is
//! Szegedy iff there are `λ` and edge phases `θₙ` with
//!
//! * `θₙ − θₙ₋₁ − 2λ ≡ δₙ (mod 2π)` for every site, and
//! * `θₙ − λ ≡ μₙ (mod π)` at every site with `rₙ ≠ 0`.
//!
//! Eliminating `θ` between consecutive constrained sites `n' < n` leaves
//! `2(n − n')λ ≡ μₙ − μₙ' − Σ_{n'<m≤n} δₘ (mod π)`, which is what
//! [`build_constraints`] collects. The shift of a certificate is
//! `S e₁ⁿ = e^{iθₙ} e₂ⁿ⁺¹` and the walk factors as
//! `U = e^{−iλ} S ⨁(2|φₙ⟩⟨φₙ| − I)`.
//!
//! Walks in other layouts are first brought to `C1` by
//! [`crate::canonical::to_c1`]; the certificate then refers to that form.
//!
//! Which sites are analysed depends on the extension:
//!
//! * `WindowOnly`: the window.
//! * `ConstantTails`: the window plus one copy of each tail site, which
//!   carries every constraint the infinite tails can produce.
//! * `Periodic(p)`: the window, with constraints taken from one period and
//!   the pair bridging into the next.

use std::collections::BTreeMap;
use std::fmt;

use crate::angle::{solve_family, Angle, CongruenceConstraint, Modulus, SolutionSet, DEFAULT_TOL};
use crate::canonical::{to_c1, ShiftEdge, ShiftOperator};
use crate::error::{Error, Result};
use crate::linalg::{
    cis, e1, e2, fix_phase, max_abs, outer, range_vector, unitarity_residual, Dense, Ket, Op2,
    dense_max_abs, C64, inner,
};
use crate::walk::{Extension, PolarCoin, TypedClass, WalkSpec, EXACT_TOL};

/// Residual below which a certificate check passes.
pub const CHECK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    /// Constrained sites in increasing order, including a periodic bridge site.
    pub sites: Vec<i64>,
    /// One constraint per consecutive pair of `sites`.
    pub constraints: Vec<CongruenceConstraint>,
    /// Sites covered by the certificate.
    pub range: (i64, i64),
    /// `δₙ` over `range`.
    pub delta: BTreeMap<i64, Angle>,
    /// `μₙ` at constrained sites of `range`.
    pub mu: BTreeMap<i64, Angle>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SzegedyCertificate {
    pub lambda: Angle,
    /// Edge phases; edge `n` joins `n` and `n + 1`.
    pub theta: BTreeMap<i64, Angle>,
    pub shift: ShiftOperator,
    pub phi: BTreeMap<i64, Ket>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "ok" } else { "FAILED" };
            writeln!(f, "{:<14} {tag:<6} residual {:.3e}", c.name, c.residual)?;
        }
        Ok(())
    }
}

fn require_c1(w: &WalkSpec) -> Result<()> {
    match w.class() {
        Some(TypedClass::C1) => Ok(()),
        Some(k) => Err(Error::WrongClass(k.to_string())),
        None => Err(Error::WrongClass("general".into())),
    }
}

fn polar_at(w: &WalkSpec, n: i64) -> Result<PolarCoin> {
    w.coin_at(n)
        .ok_or_else(|| Error::InvalidSpec(format!("no coin at site {n}")))?
        .polar_form_at(Some(n))
}

/// Sites covered by the certificate of a `C1` walk.
fn certificate_range(w: &WalkSpec) -> (i64, i64) {
    let (lo, hi) = w.window();
    match w.extension() {
        Extension::ConstantTails => (lo - 1, hi + 1),
        _ => (lo, hi),
    }
}

/// Sites scanned for constrained pairs, plus the periodic bridge if any.
fn constrained_sites(w: &WalkSpec, polar: &dyn Fn(i64) -> Result<PolarCoin>) -> Result<Vec<i64>> {
    let (lo, hi) = certificate_range(w);
    match w.extension() {
        Extension::Periodic(p) => {
            let p = p as i64;
            let mut sites = Vec::new();
            for n in lo..lo + p {
                if polar(n)?.is_constrained() {
                    sites.push(n);
                }
            }
            if let Some(&first) = sites.first() {
                sites.push(first + p);
            }
            Ok(sites)
        }
        _ => {
            let mut sites = Vec::new();
            for n in lo..=hi {
                if polar(n)?.is_constrained() {
                    sites.push(n);
                }
            }
            Ok(sites)
        }
    }
}

/// Congruences on λ for a `C1` walk.
pub fn build_constraints(w: &WalkSpec) -> Result<ConstraintSystem> {
    require_c1(w)?;
    w.ensure_valid()?;
    let polar = |n: i64| polar_at(w, n);
    let range = certificate_range(w);
    let sites = constrained_sites(w, &polar)?;
    let span_hi = sites.last().copied().unwrap_or(range.1).max(range.1);
    let mut delta = BTreeMap::new();
    let mut mu = BTreeMap::new();
    for n in range.0..=span_hi {
        let pc = polar(n)?;
        delta.insert(n, pc.delta);
        if pc.is_constrained() {
            mu.insert(n, pc.mu);
        }
    }
    let constraints = sites
        .windows(2)
        .map(|pair| {
            let (a, b) = (pair[0], pair[1]);
            let sum = (a + 1..=b).fold(Angle::ZERO, |acc, n| acc + delta[&n]);
            CongruenceConstraint::new(b - a, mu[&b] - mu[&a] - sum)
        })
        .collect();
    mu.retain(|n, _| *n <= range.1);
    delta.retain(|n, _| *n <= range.1);
    Ok(ConstraintSystem {
        sites,
        constraints,
        range,
        delta,
        mu,
    })
}

/// All λ in `[0, π)` admitting a certificate.
pub fn lambda_candidates(w: &WalkSpec) -> Result<SolutionSet> {
    let w1 = to_c1(w)?;
    let sys = build_constraints(&w1)?;
    Ok(solve_family(&sys.constraints, DEFAULT_TOL))
}

/// A certificate for the smallest admissible λ, or `None` if the walk is not Szegedy.
pub fn solve(w: &WalkSpec) -> Result<Option<SzegedyCertificate>> {
    let w1 = to_c1(w)?;
    let sys = build_constraints(&w1)?;
    match solve_family(&sys.constraints, DEFAULT_TOL).first() {
        Some(lambda) => certificate_for(&w1, &sys, lambda).map(Some),
        None => Ok(None),
    }
}

/// Builds the certificate for a given admissible λ by propagating θ from an anchor.
fn certificate_for(w: &WalkSpec, sys: &ConstraintSystem, lambda: Angle) -> Result<SzegedyCertificate> {
    let (lo, hi) = sys.range;
    let two_lambda = lambda.scale(2);
    let anchor = sys
        .mu
        .keys()
        .copied()
        .min_by_key(|n| (n.abs(), *n))
        .map(|n| (n, (sys.mu[&n] + lambda).normalize(Modulus::TwoPi)));
    let (n0, theta0) = anchor.unwrap_or((lo - 1, Angle::ZERO));
    let mut theta = BTreeMap::new();
    theta.insert(n0, theta0);
    let mut cur = theta0;
    for n in n0 + 1..=hi {
        cur = (cur + two_lambda + sys.delta[&n]).normalize(Modulus::TwoPi);
        theta.insert(n, cur);
    }
    cur = theta0;
    for n in (lo..=n0).rev() {
        cur = (cur - two_lambda - sys.delta[&n]).normalize(Modulus::TwoPi);
        theta.insert(n - 1, cur);
    }
    let shift = shift_from_theta(&theta);
    let mut phi = BTreeMap::new();
    for n in lo..=hi {
        let block = szegedy_block(w, &shift, lambda, n)?;
        let proj = (block + Op2::identity()) * C64::new(0.5, 0.0);
        let v = range_vector(&proj)
            .ok_or_else(|| Error::InvalidSpec(format!("degenerate block at site {n}")))?;
        phi.insert(n, fix_phase(&v, EXACT_TOL));
    }
    Ok(SzegedyCertificate {
        lambda,
        theta,
        shift,
        phi,
    })
}

/// The shift `S e₁ⁿ = e^{iθₙ} e₂ⁿ⁺¹` for the given edge phases.
pub fn shift_from_theta(theta: &BTreeMap<i64, Angle>) -> ShiftOperator {
    ShiftOperator {
        edges: theta
            .iter()
            .map(|(n, t)| {
                (
                    *n,
                    ShiftEdge {
                        left: e1(),
                        right: e2(),
                        phase: *t,
                    },
                )
            })
            .collect(),
    }
}

/// `U_{n−1,n}` and `U_{n+1,n}` of a `C1` site, from its coin alone.
fn c1_blocks(w: &WalkSpec, n: i64) -> Result<(Op2, Op2)> {
    let b = w
        .coin_at(n)
        .map(|c| TypedClass::C1.bases(c))
        .ok_or_else(|| Error::InvalidSpec(format!("no coin at site {n}")))?;
    Ok((outer(&e1(), &b.zeta_minus), outer(&e2(), &b.zeta_plus)))
}

/// Block `n` of `e^{iλ} S U`.
fn szegedy_block(w: &WalkSpec, shift: &ShiftOperator, lambda: Angle, n: i64) -> Result<Op2> {
    let (left, right) = c1_blocks(w, n)?;
    let missing = || Error::InvalidSpec(format!("shift lacks an edge next to site {n}"));
    let s_in = shift.forward(n - 1).ok_or_else(missing)?;
    let s_back = shift.backward(n).ok_or_else(missing)?;
    Ok((s_in * left + s_back * right) * cis(lambda.radians()))
}

/// Checks a certificate against a walk; failures are reported, not raised.
pub fn verify_certificate(w: &WalkSpec, cert: &SzegedyCertificate) -> VerificationReport {
    let mut checks = Vec::new();
    let prepared = to_c1(w).and_then(|w1| build_constraints(&w1).map(|sys| (w1, sys)));
    let (w1, sys) = match prepared {
        Ok(x) => x,
        Err(_) => {
            for name in ["congruences", "shift", "ranges", "blocks", "reflections"] {
                checks.push(CheckResult {
                    name,
                    passed: false,
                    residual: f64::INFINITY,
                });
            }
            return VerificationReport { passed: false, checks };
        }
    };
    let (lo, hi) = sys.range;

    // (i) θₙ − θₙ₋₁ − 2λ ≡ δₙ (mod 2π) and θₙ − λ ≡ μₙ (mod π).
    let mut res = 0.0f64;
    for n in lo..=hi {
        match (cert.theta.get(&n), cert.theta.get(&(n - 1))) {
            (Some(t), Some(tp)) => {
                let lhs = *t - *tp - cert.lambda.scale(2);
                res = res.max(lhs.dist_mod(&sys.delta[&n], Modulus::TwoPi));
                if let Some(mu) = sys.mu.get(&n) {
                    res = res.max((*t - cert.lambda).dist_mod(mu, Modulus::Pi));
                }
            }
            _ => res = f64::INFINITY,
        }
    }
    checks.push(result("congruences", res));

    // (ii) S = S†, S² = I on the span of the edges lo−1..hi.
    checks.push(result("shift", shift_residual(&cert.shift, lo, hi)));

    // (iii) S maps ran U_{n,n+1} onto ran U_{n+1,n}.
    let mut res = 0.0f64;
    for n in lo..hi {
        let ranges = c1_blocks(&w1, n + 1)
            .and_then(|(l_next, _)| c1_blocks(&w1, n).map(|(_, r_here)| (l_next, r_here)));
        match (ranges, cert.shift.forward(n)) {
            (Ok((l_next, r_here)), Some(s)) => match (range_vector(&l_next), range_vector(&r_here)) {
                (Some(from), Some(to)) => {
                    let img = s * from;
                    let along = to * inner(&to, &img);
                    res = res.max((img - along).norm()).max((img.norm() - 1.0).abs());
                }
                _ => res = f64::INFINITY,
            },
            _ => res = f64::INFINITY,
        }
    }
    checks.push(result("ranges", res));

    // (iv) blocks traceless, self-adjoint, unitary; (v) blocks are 2φφ† − I.
    let (mut res4, mut res5) = (0.0f64, 0.0f64);
    for n in lo..=hi {
        match szegedy_block(&w1, &cert.shift, cert.lambda, n) {
            Ok(c) => {
                res4 = res4
                    .max(c.trace().norm())
                    .max(max_abs(&(c - c.adjoint())))
                    .max(unitarity_residual(&c));
                match cert.phi.get(&n) {
                    Some(phi) => {
                        let refl = outer(phi, phi) * C64::new(2.0, 0.0) - Op2::identity();
                        res5 = res5.max(max_abs(&(c - refl))).max(phase_residual(phi));
                    }
                    None => res5 = f64::INFINITY,
                }
            }
            Err(_) => {
                res4 = f64::INFINITY;
                res5 = f64::INFINITY;
            }
        }
    }
    checks.push(result("blocks", res4));
    checks.push(result("reflections", res5));

    VerificationReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn result(name: &'static str, residual: f64) -> CheckResult {
    CheckResult {
        name,
        passed: residual < CHECK_TOL,
        residual,
    }
}

/// Deviation of `φ` from the phase convention: first nonzero component real positive.
fn phase_residual(phi: &Ket) -> f64 {
    let pivot = if phi[0].norm() > EXACT_TOL { phi[0] } else { phi[1] };
    let sign = if pivot.re > 0.0 { 0.0 } else { pivot.norm() };
    pivot.im.abs().max(sign).max((phi.norm() - 1.0).abs())
}

/// Dense `S − S†` and `S² − Π` on sites `lo − 1..=hi + 1`, where `Π` projects
/// onto the vectors some edge touches.
fn shift_residual(shift: &ShiftOperator, lo: i64, hi: i64) -> f64 {
    let base = lo - 1;
    let dim = 2 * (hi - lo + 3) as usize;
    let mut s = Dense::zeros(dim, dim);
    let mut touched = vec![false; dim];
    for n in lo - 1..=hi {
        let (Some(fw), Some(bw)) = (shift.forward(n), shift.backward(n)) else {
            return f64::INFINITY;
        };
        let a = 2 * (n - base) as usize;
        let b = a + 2;
        for i in 0..2 {
            for j in 0..2 {
                s[(b + i, a + j)] += fw[(i, j)];
                s[(a + i, b + j)] += bw[(i, j)];
            }
        }
        let edge = &shift.edges[&n];
        for (k, amp) in edge.left.iter().enumerate() {
            if amp.norm() > 0.0 {
                touched[a + k] = true;
            }
        }
        for (k, amp) in edge.right.iter().enumerate() {
            if amp.norm() > 0.0 {
                touched[b + k] = true;
            }
        }
    }
    let mut proj = Dense::zeros(dim, dim);
    for (k, t) in touched.iter().enumerate() {
        if *t {
            proj[(k, k)] = C64::new(1.0, 0.0);
        }
    }
    dense_max_abs(&(&s - s.adjoint())).max(dense_max_abs(&(&s * &s - proj)))
}

/// The η-criterion on consecutive constrained sites `n' < n`:
/// `μₙ' + νₙ + Σ_{n'<m<n} δₘ ≡ η(n − n') (mod π)`.
///
/// Returns the smallest η in `[0, π)`, or `None` if no η works.
pub fn eta_criterion(w: &WalkSpec) -> Result<Option<Angle>> {
    Ok(eta_candidates(w)?.into_iter().next())
}

/// Every η in `[0, π)` satisfying the η-criterion, sorted.
pub fn eta_candidates(w: &WalkSpec) -> Result<Vec<Angle>> {
    let w1 = to_c1(w)?;
    w1.ensure_valid()?;
    let polar = |n: i64| polar_at(&w1, n);
    let sites = constrained_sites(&w1, &polar)?;
    if sites.is_empty() {
        return Err(Error::EmptyLambda);
    }
    let mut pairs = Vec::new();
    for pair in sites.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let mut rhs = polar(a)?.mu + polar(b)?.nu;
        for m in a + 1..b {
            rhs = rhs + polar(m)?.delta;
        }
        pairs.push((b - a, rhs.normalize(Modulus::Pi)));
    }
    let Some(&(d1, rhs1)) = pairs.first() else {
        return Ok(vec![Angle::ZERO]);
    };
    let mut out: Vec<Angle> = Vec::new();
    for m in 0..d1 {
        let eta = (rhs1 + Angle::PI.scale(m)).div_int(d1).normalize(Modulus::Pi);
        let ok = pairs
            .iter()
            .all(|(d, rhs)| eta.scale(*d).equal_mod(rhs, Modulus::Pi, DEFAULT_TOL));
        if ok && !out.iter().any(|o| o.equal_mod(&eta, Modulus::Pi, DEFAULT_TOL)) {
            out.push(eta);
        }
    }
    out.sort_by(|a, b| a.radians().total_cmp(&b.radians()));
    Ok(out)
}
