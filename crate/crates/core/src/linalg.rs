//! Small dense/tridiagonal routines used by the radial solvers.

use crate::scalar::Scalar;

/// Solves a tridiagonal system with the Thomas algorithm.
///
/// `lower[i]` couples row `i + 1` to column `i`, `upper[i]` couples row `i`
/// to column `i + 1`. Returns `None` when a pivot vanishes.
pub fn solve_tridiagonal<T: Scalar>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Option<Vec<T>> {
    let n = diag.len();
    assert_eq!(rhs.len(), n);
    assert!(n == 0 || (lower.len() == n - 1 && upper.len() == n - 1));
    if n == 0 {
        return Some(Vec::new());
    }
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut pivot = diag[0];
    if pivot == T::zero() {
        return None;
    }
    if n > 1 {
        c[0] = upper[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if pivot == T::zero() || !pivot.is_finite() {
            return None;
        }
        if i < n - 1 {
            c[i] = upper[i] / pivot;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = d[i + 1];
        d[i] -= c[i] * next;
    }
    Some(d)
}

/// Symmetric tridiagonal matrix given by its diagonal and off-diagonal.
#[derive(Debug, Clone)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Scalar> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Self {
        assert!(!diag.is_empty() && off.len() + 1 == diag.len());
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    fn count_below(&self, x: T) -> usize {
        let tiny = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < T::zero() {
            count += 1;
        }
        for i in 1..self.len() {
            if q.abs() < tiny {
                q = tiny;
            }
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Lowest eigenvalue and its unit eigenvector.
    ///
    /// The eigenvalue is bracketed by bisection on the Sturm count down to
    /// round-off, then the eigenvector is obtained by inverse iteration.
    pub fn lowest_eigenpair(&self) -> (T, Vec<T>) {
        let n = self.len();
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(T::min_positive_value());
        for _ in 0..200 {
            let mid = T::lit(0.5) * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= T::epsilon() * scale {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lambda = T::lit(0.5) * (lo + hi);
        if n == 1 {
            return (self.diag[0], vec![T::one()]);
        }
        // Shift slightly below the eigenvalue so the shifted matrix stays
        // positive definite.
        let shift = lambda - T::lit(64.0) * T::epsilon() * scale;
        let diag: Vec<T> = self.diag.iter().map(|&d| d - shift).collect();
        let mut v = vec![T::one(); n];
        for _ in 0..6 {
            let Some(w) = solve_tridiagonal(&self.off, &diag, &self.off, &v) else {
                break;
            };
            let norm = w.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
            v = w.into_iter().map(|x| x / norm).collect();
        }
        if v.iter().fold(T::zero(), |acc, &x| acc + x) < T::zero() {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        // Rayleigh quotient refines the eigenvalue to the accuracy of the vector.
        let rq = self.rayleigh_quotient(&v);
        (rq, v)
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn rayleigh_quotient(&self, v: &[T]) -> T {
        let av = self.apply(v);
        let num = av.iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
        let den = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
        num / den
    }
}

/// Least-squares line through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginFit<T> {
    pub slope: T,
    /// Relative RMS residual `‖y - s x‖ / ‖y‖`.
    pub residual: T,
}

pub fn fit_through_origin<T: Scalar>(x: &[T], y: &[T]) -> OriginFit<T> {
    assert_eq!(x.len(), y.len());
    let sxx = x.iter().fold(T::zero(), |a, &v| a + v * v);
    let sxy = x.iter().zip(y).fold(T::zero(), |a, (&u, &v)| a + u * v);
    let slope = if sxx > T::zero() { sxy / sxx } else { T::zero() };
    let syy = y.iter().fold(T::zero(), |a, &v| a + v * v);
    let sres = x
        .iter()
        .zip(y)
        .fold(T::zero(), |a, (&u, &v)| a + (v - slope * u) * (v - slope * u));
    let residual = if syy > T::zero() { (sres / syy).sqrt() } else { T::zero() };
    OriginFit { slope, residual }
}

/// Ordinary least-squares line `y = a + b x`; returns `(a, b)`.
pub fn fit_line<T: Scalar>(x: &[T], y: &[T]) -> (T, T) {
    assert_eq!(x.len(), y.len());
    let n = T::from_count(x.len());
    let mx = x.iter().fold(T::zero(), |a, &v| a + v) / n;
    let my = y.iter().fold(T::zero(), |a, &v| a + v) / n;
    let sxx = x.iter().fold(T::zero(), |a, &v| a + (v - mx) * (v - mx));
    let sxy = x
        .iter()
        .zip(y)
        .fold(T::zero(), |a, (&u, &v)| a + (u - mx) * (v - my));
    let b = sxy / sxx;
    (my - b * mx, b)
}
