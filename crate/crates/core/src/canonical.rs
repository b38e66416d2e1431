//! Unitary equivalence on the line: intertwiners into the four typed layouts,
//! sitewise conjugation, and the shift–coin factorization `U = ST`.

use std::collections::BTreeMap;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::linalg::{cis, dense_max_abs, e1, e2, max_abs, outer, unitarity_residual, Dense, Ket, Op2};
use crate::walk::{block_diagonal, Coin2, Extension, Form, TypedClass, WalkSpec, EXACT_TOL};

/// `W = ⊕ Wₙ` over a window.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteUnitaryFamily {
    n_min: i64,
    unitaries: Vec<Op2>,
}

impl SiteUnitaryFamily {
    pub fn new(n_min: i64, unitaries: Vec<Op2>) -> Result<SiteUnitaryFamily> {
        if unitaries.is_empty() {
            return Err(Error::InvalidSpec("empty site unitary family".into()));
        }
        for (i, u) in unitaries.iter().enumerate() {
            let residual = unitarity_residual(u);
            if residual > 1e-9 {
                return Err(Error::NotUnitary {
                    site: Some(n_min + i as i64),
                    residual,
                });
            }
        }
        Ok(SiteUnitaryFamily { n_min, unitaries })
    }

    pub fn identity(window: (i64, i64)) -> SiteUnitaryFamily {
        SiteUnitaryFamily::constant(window, Op2::identity())
    }

    pub fn constant(window: (i64, i64), u: Op2) -> SiteUnitaryFamily {
        let len = (window.1 - window.0 + 1) as usize;
        SiteUnitaryFamily {
            n_min: window.0,
            unitaries: vec![u; len],
        }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.n_min, self.n_min + self.unitaries.len() as i64 - 1)
    }

    pub fn unitaries(&self) -> &[Op2] {
        &self.unitaries
    }

    /// Site unitary at `n`, extended the same way as `ext` extends a walk.
    pub fn at(&self, n: i64, ext: Extension) -> Option<&Op2> {
        ext.locate(n, self.window()).map(|i| &self.unitaries[i])
    }

    pub fn max_unitarity_residual(&self) -> f64 {
        self.unitaries.iter().map(unitarity_residual).fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.unitaries
            .iter()
            .all(|u| max_abs(&(u - Op2::identity())) <= tol)
    }

    pub fn dense(&self) -> Dense {
        block_diagonal(&self.unitaries)
    }
}

/// Converts a walk into the typed layout `class`, returning the typed walk and
/// the intertwiner `W` with `W U W* = U_typed`.
pub fn general_to_type(w: &WalkSpec, class: TypedClass) -> Result<(WalkSpec, SiteUnitaryFamily)> {
    w.ensure_valid()?;
    let mut coins = Vec::with_capacity(w.len());
    let mut ws = Vec::with_capacity(w.len());
    for b in w.all_bases() {
        let (wn, coin) = match class {
            TypedClass::C1 => {
                let wn = outer(&e1(), &b.xi_plus) + outer(&e2(), &b.xi_minus);
                let (top, bottom) = (wn * b.zeta_minus, wn * b.zeta_plus);
                (wn, rows(&top, &bottom))
            }
            TypedClass::C2 => {
                let wn = outer(&e1(), &b.zeta_minus) + outer(&e2(), &b.zeta_plus);
                (wn, columns(&(wn * b.xi_plus), &(wn * b.xi_minus)))
            }
            TypedClass::C3 => {
                let wn = outer(&e2(), &b.xi_plus) + outer(&e1(), &b.xi_minus);
                let (bottom, top) = (wn * b.zeta_minus, wn * b.zeta_plus);
                (wn, rows(&top, &bottom))
            }
            TypedClass::C4 => {
                let wn = outer(&e2(), &b.zeta_minus) + outer(&e1(), &b.zeta_plus);
                (wn, columns(&(wn * b.xi_minus), &(wn * b.xi_plus)))
            }
        };
        ws.push(wn);
        coins.push(coin);
    }
    let typed = WalkSpec::typed(class, w.window().0, coins, w.extension())?;
    Ok((
        typed,
        SiteUnitaryFamily {
            n_min: w.window().0,
            unitaries: ws,
        },
    ))
}

/// Coin whose rows are the adjoints of `top` and `bottom`.
fn rows(top: &Ket, bottom: &Ket) -> Coin2 {
    Coin2::new(top[0].conj(), top[1].conj(), bottom[0].conj(), bottom[1].conj())
}

fn columns(left: &Ket, right: &Ket) -> Coin2 {
    Coin2::new(left[0], right[0], left[1], right[1])
}

/// Reads a typed walk's coins as general-form site vectors.
pub fn typed_to_general(w: &WalkSpec) -> Result<WalkSpec> {
    if w.class().is_none() {
        return Err(Error::InvalidSpec("walk is already in general form".into()));
    }
    w.ensure_valid()?;
    Ok(w.to_general())
}

/// Class-C1 representative of any walk; C1 inputs are returned unchanged.
pub fn to_c1(w: &WalkSpec) -> Result<WalkSpec> {
    match w.class() {
        Some(TypedClass::C1) => Ok(w.clone()),
        _ => general_to_type(w, TypedClass::C1).map(|(t, _)| t),
    }
}

/// `W U W*`, blockwise `Wₙ U_{nm} Wₘ*`.
pub fn apply_equivalence(w: &WalkSpec, family: &SiteUnitaryFamily) -> Result<WalkSpec> {
    if family.window() != w.window() {
        let (walk_min, walk_max) = w.window();
        let (family_min, family_max) = family.window();
        return Err(Error::WindowMismatch {
            walk_min,
            walk_max,
            family_min,
            family_max,
        });
    }
    if let Extension::Periodic(p) = w.extension() {
        for (i, n) in w.sites().enumerate().skip(p) {
            if max_abs(&(family.unitaries[i] - family.unitaries[i - p])) > EXACT_TOL {
                return Err(Error::PeriodMismatch { period: p, site: n });
            }
        }
    }
    let sites = w
        .all_bases()
        .iter()
        .zip(&family.unitaries)
        .map(|(b, u)| b.transformed(u))
        .collect();
    WalkSpec::new(Form::General(sites), w.window().0, w.extension())
}

/// One shift edge between sites `n` and `n + 1`:
/// `S|left⟩ = e^{iφ}|right⟩`, `S|right⟩ = e^{−iφ}|left⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftEdge {
    pub left: Ket,
    pub right: Ket,
    pub phase: Angle,
}

/// Self-adjoint shift described edge by edge; edge `n` joins `n` and `n + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOperator {
    pub edges: BTreeMap<i64, ShiftEdge>,
}

impl ShiftOperator {
    /// `S_{n+1,n}`.
    pub fn forward(&self, n: i64) -> Option<Op2> {
        self.edges
            .get(&n)
            .map(|e| outer(&e.right, &e.left) * cis(e.phase.radians()))
    }

    /// `S_{n,n+1}`.
    pub fn backward(&self, n: i64) -> Option<Op2> {
        self.edges
            .get(&n)
            .map(|e| outer(&e.left, &e.right) * cis(-e.phase.radians()))
    }

    /// Dense matrix on the window closed into a ring; edge `n_max` wraps to `n_min`.
    pub fn dense_on_ring(&self, window: (i64, i64)) -> Result<Dense> {
        let (lo, hi) = window;
        let len = (hi - lo + 1) as usize;
        let mut m = Dense::zeros(2 * len, 2 * len);
        for n in lo..=hi {
            let (fw, bw) = match (self.forward(n), self.backward(n)) {
                (Some(f), Some(b)) => (f, b),
                _ => {
                    return Err(Error::InvalidSpec(format!("shift has no edge at {n}")));
                }
            };
            let a = 2 * (n - lo) as usize;
            let b = 2 * ((n + 1 - lo).rem_euclid(len as i64)) as usize;
            for i in 0..2 {
                for j in 0..2 {
                    m[(b + i, a + j)] += fw[(i, j)];
                    m[(a + i, b + j)] += bw[(i, j)];
                }
            }
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftCoinFactorization {
    pub shift: ShiftOperator,
    pub coins: SiteUnitaryFamily,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorizationResiduals {
    pub self_adjoint: f64,
    pub involution: f64,
    pub reconstruction: f64,
}

impl FactorizationResiduals {
    pub fn max(&self) -> f64 {
        self.self_adjoint.max(self.involution).max(self.reconstruction)
    }
}

/// `U = S T` with `S ξ_{n,n+1} = ξ_{n+1,n}` and
/// `Tₙ = |ξ_{n,n−1}⟩⟨ζ_{n−1,n}| + |ξ_{n,n+1}⟩⟨ζ_{n+1,n}|`.
pub fn factor_shift_coin(w: &WalkSpec) -> Result<ShiftCoinFactorization> {
    w.ensure_valid()?;
    let (lo, hi) = w.window();
    let mut edges = BTreeMap::new();
    for n in lo..=hi {
        if let (Some(here), Some(next)) = (w.bases_at(n), w.bases_at(n + 1)) {
            edges.insert(
                n,
                ShiftEdge {
                    left: here.xi_plus,
                    right: next.xi_minus,
                    phase: Angle::ZERO,
                },
            );
        }
    }
    let coins = w
        .all_bases()
        .iter()
        .map(|b| outer(&b.xi_minus, &b.zeta_minus) + outer(&b.xi_plus, &b.zeta_plus))
        .collect();
    Ok(ShiftCoinFactorization {
        shift: ShiftOperator { edges },
        coins: SiteUnitaryFamily { n_min: lo, unitaries: coins },
    })
}

impl ShiftCoinFactorization {
    /// Dense residuals of `S = S†`, `S² = I` and `ST = U` on a periodic window.
    pub fn residuals(&self, w: &WalkSpec) -> Result<FactorizationResiduals> {
        let u = w.unitary_on_window()?;
        let s = self.shift.dense_on_ring(w.window())?;
        let t = self.coins.dense();
        let id = Dense::identity(s.nrows(), s.ncols());
        Ok(FactorizationResiduals {
            self_adjoint: dense_max_abs(&(&s - s.adjoint())),
            involution: dense_max_abs(&(&s * &s - id)),
            reconstruction: dense_max_abs(&(&s * &t - u)),
        })
    }
}
