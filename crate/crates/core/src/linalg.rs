//! Small dense complex helpers for 2×2 site blocks and window matrices.

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

pub type C64 = Complex64;
/// A vector in one site space `C²`.
pub type Ket = Vector2<C64>;
/// A 2×2 operator between site spaces.
pub type Op2 = Matrix2<C64>;
pub type Dense = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn e1() -> Ket {
    Ket::new(ONE, ZERO)
}

pub fn e2() -> Ket {
    Ket::new(ZERO, ONE)
}

pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// `|a⟩⟨b|`
pub fn outer(a: &Ket, b: &Ket) -> Op2 {
    a * b.adjoint()
}

/// `⟨a|b⟩`, antilinear in the first slot.
pub fn inner(a: &Ket, b: &Ket) -> C64 {
    a.dotc(b)
}

pub fn max_abs(m: &Op2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn dense_max_abs(m: &Dense) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max(‖M†M − I‖, ‖MM† − I‖)` entrywise.
pub fn unitarity_residual(m: &Op2) -> f64 {
    let id = Op2::identity();
    max_abs(&(m.adjoint() * m - id)).max(max_abs(&(m * m.adjoint() - id)))
}

pub fn dense_unitarity_residual(m: &Dense) -> f64 {
    let n = m.nrows();
    dense_max_abs(&(m.adjoint() * m - Dense::identity(n, n)))
}

/// Largest deviation of `{a, b}` from an orthonormal pair.
pub fn orthonormality_residual(a: &Ket, b: &Ket) -> f64 {
    (a.norm_squared() - 1.0)
        .abs()
        .max((b.norm_squared() - 1.0).abs())
        .max(inner(a, b).norm())
}

/// Singular values of a 2×2 matrix, largest first.
pub fn singular_values(m: &Op2) -> (f64, f64) {
    let fro2 = m.norm_squared();
    let det = m.determinant().norm();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((fro2 + disc) / 2.0).sqrt();
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    (s1, s2)
}

/// Unit vector spanning the range of a (numerically) rank-1 matrix.
pub fn range_vector(m: &Op2) -> Option<Ket> {
    let c0 = m.column(0).into_owned();
    let c1 = m.column(1).into_owned();
    let v = if c0.norm() >= c1.norm() { c0 } else { c1 };
    let n = v.norm();
    (n > 0.0).then(|| v / C64::new(n, 0.0))
}

/// Fixes the global phase so the first nonzero component is real and positive.
pub fn fix_phase(v: &Ket, tol: f64) -> Ket {
    let pivot = if v[0].norm() > tol { v[0] } else { v[1] };
    if pivot.norm() == 0.0 {
        return *v;
    }
    let ph = pivot.conj() / C64::new(pivot.norm(), 0.0);
    v * ph
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_values_of_rank_one() {
        let m = outer(&Ket::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)), &e1());
        let (s1, s2) = singular_values(&m);
        assert!((s1 - 1.0).abs() < 1e-15);
        assert!(s2 < 1e-15);
    }

    #[test]
    fn singular_values_of_unitary() {
        let h = 1.0 / 2f64.sqrt();
        let m = Op2::new(C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0));
        let (s1, s2) = singular_values(&m);
        assert!((s1 - 1.0).abs() < 1e-15 && (s2 - 1.0).abs() < 1e-15);
        assert!(unitarity_residual(&m) < 1e-15);
    }

    #[test]
    fn phase_fix_first_component() {
        let v = Ket::new(C64::new(0.0, 0.6), C64::new(0.8, 0.0));
        let w = fix_phase(&v, 1e-12);
        assert!((w[0] - C64::new(0.6, 0.0)).norm() < 1e-15);
        assert!((w[1] - C64::new(0.0, -0.8)).norm() < 1e-15);
    }
}
