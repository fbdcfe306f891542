//! Piecewise wavelet kernels g on [0, ∞) and the constant
//! C_g = ∫_0^∞ g(x)² / x dx.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Piece {
    /// Σ a_i x^i, coefficients in ascending order.
    Polynomial(Vec<f64>),
    /// coef · x^exponent.
    Power { coef: f64, exponent: f64 },
}

impl Piece {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Piece::Polynomial(a) => a.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Piece::Power { coef, exponent } => coef * x.powf(*exponent),
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        match self {
            Piece::Polynomial(a) => a
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (i, c)| acc * x + i as f64 * c),
            Piece::Power { coef, exponent } => coef * exponent * x.powf(exponent - 1.0),
        }
    }

    fn scaled(&self, c: f64) -> Piece {
        match self {
            Piece::Polynomial(a) => Piece::Polynomial(a.iter().map(|x| c * x).collect()),
            Piece::Power { coef, exponent } => Piece::Power {
                coef: c * coef,
                exponent: *exponent,
            },
        }
    }

    /// ∫_a^b piece(x)² / x dx in closed form.
    fn log_energy(&self, a: f64, b: f64) -> Result<f64> {
        match self {
            Piece::Polynomial(coeffs) => {
                let mut sq = vec![0.0; 2 * coeffs.len()];
                for (i, x) in coeffs.iter().enumerate() {
                    for (j, y) in coeffs.iter().enumerate() {
                        sq[i + j] += x * y;
                    }
                }
                while sq.last() == Some(&0.0) {
                    sq.pop();
                }
                if sq.is_empty() {
                    return Ok(0.0);
                }
                if b.is_infinite() {
                    return Err(Error::DivergentIntegral("polynomial piece extends to infinity".into()));
                }
                let mut total = 0.0;
                if sq[0] != 0.0 {
                    if a == 0.0 {
                        return Err(Error::DivergentIntegral(
                            "g(0) ≠ 0 makes g²/x non-integrable at 0".into(),
                        ));
                    }
                    total += sq[0] * (b / a).ln();
                }
                for (n, q) in sq.iter().enumerate().skip(1) {
                    total += q * (b.powi(n as i32) - a.powi(n as i32)) / n as f64;
                }
                Ok(total)
            }
            Piece::Power { coef, exponent } => {
                let c2 = coef * coef;
                let p = 2.0 * exponent;
                if c2 == 0.0 {
                    return Ok(0.0);
                }
                if p == 0.0 {
                    if a == 0.0 || b.is_infinite() {
                        return Err(Error::DivergentIntegral(
                            "constant piece on an unbounded log range".into(),
                        ));
                    }
                    return Ok(c2 * (b / a).ln());
                }
                if (b.is_infinite() && p > 0.0) || (a == 0.0 && p < 0.0) {
                    return Err(Error::DivergentIntegral(format!(
                        "power x^{exponent} is not square-log integrable here"
                    )));
                }
                let upper = if b.is_infinite() { 0.0 } else { b.powf(p) };
                let lower = if a == 0.0 { 0.0 } else { a.powf(p) };
                Ok(c2 * (upper - lower) / p)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelPiece {
    pub start: f64,
    /// Exclusive end; `f64::INFINITY` for the last piece.
    pub end: f64,
    pub piece: Piece,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub pieces: Vec<KernelPiece>,
    /// Order M with g(x) ≈ c x^M near 0.
    pub vanishing_order: u32,
}

/// x² on [0, 1], −5 + 11x − 6x² + x³ on (1, 2), 4x^{-2} on [2, ∞).
pub fn default_kernel() -> KernelSpec {
    KernelSpec {
        pieces: vec![
            KernelPiece {
                start: 0.0,
                end: 1.0,
                piece: Piece::Polynomial(vec![0.0, 0.0, 1.0]),
            },
            KernelPiece {
                start: 1.0,
                end: 2.0,
                piece: Piece::Polynomial(vec![-5.0, 11.0, -6.0, 1.0]),
            },
            KernelPiece {
                start: 2.0,
                end: f64::INFINITY,
                piece: Piece::Power {
                    coef: 4.0,
                    exponent: -2.0,
                },
            },
        ],
        vanishing_order: 2,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BreakpointGap {
    pub at: f64,
    pub value_gap: f64,
    pub derivative_gap: f64,
}

impl KernelSpec {
    fn piece_at(&self, x: f64) -> &Piece {
        self.pieces
            .iter()
            .find(|p| x < p.end)
            .map(|p| &p.piece)
            .unwrap_or(&self.pieces.last().expect("kernel has pieces").piece)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::NegativeArgument(x));
        }
        Ok(self.piece_at(x).eval(x))
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::NegativeArgument(x));
        }
        Ok(self.piece_at(x).derivative(x))
    }

    /// Jumps in value and first derivative at each interior breakpoint.
    pub fn breakpoint_gaps(&self) -> Vec<BreakpointGap> {
        self.pieces
            .windows(2)
            .map(|w| {
                let x = w[0].end;
                BreakpointGap {
                    at: x,
                    value_gap: (w[0].piece.eval(x) - w[1].piece.eval(x)).abs(),
                    derivative_gap: (w[0].piece.derivative(x) - w[1].piece.derivative(x)).abs(),
                }
            })
            .collect()
    }

    pub fn scaled(&self, c: f64) -> KernelSpec {
        KernelSpec {
            pieces: self
                .pieces
                .iter()
                .map(|p| KernelPiece {
                    start: p.start,
                    end: p.end,
                    piece: p.piece.scaled(c),
                })
                .collect(),
            vanishing_order: self.vanishing_order,
        }
    }

    /// g(x) / x^M at each sample point; tends to a constant as x → 0⁺.
    pub fn vanishing_profile(&self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter()
            .map(|&x| Ok(self.eval(x)? / x.powi(self.vanishing_order as i32)))
            .collect()
    }

    /// C_g summed from closed forms on each piece.
    pub fn cg_constant(&self) -> Result<f64> {
        self.pieces.iter().map(|p| p.piece.log_energy(p.start, p.end)).sum()
    }

    /// C_g by Gauss-Legendre quadrature in u = ln x, one 20-point panel per
    /// unit of u, extended outward until a panel adds less than 1e-17 of
    /// the running total.
    pub fn cg_gauss_legendre(&self) -> Result<f64> {
        let (nodes, weights) = gauss_legendre(20);
        let integrand = |u: f64| -> f64 {
            let g = self.eval(u.exp()).expect("positive argument");
            g * g
        };
        let panel = |a: f64| -> f64 {
            nodes
                .iter()
                .zip(&weights)
                .map(|(t, w)| 0.5 * w * integrand(a + 0.5 * (t + 1.0)))
                .sum()
        };
        let breaks: Vec<f64> = self
            .pieces
            .iter()
            .map(|p| p.start)
            .chain(self.pieces.iter().map(|p| p.end))
            .filter(|x| *x > 0.0 && x.is_finite())
            .map(f64::ln)
            .collect();
        let lo = breaks.iter().cloned().fold(0.0, f64::min).floor();
        let hi = breaks.iter().cloned().fold(0.0, f64::max).ceil();
        // Panels on [lo, hi] are split at breakpoints so each sees one piece.
        let mut total = 0.0;
        let mut cuts: Vec<f64> = (lo as i64..=hi as i64)
            .map(|i| i as f64)
            .chain(breaks.iter().cloned())
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            total += nodes
                .iter()
                .zip(&weights)
                .map(|(t, wt)| 0.5 * (b - a) * wt * integrand(a + 0.5 * (b - a) * (t + 1.0)))
                .sum::<f64>();
        }
        let tail = |start: f64, step: f64, total: &mut f64| -> Result<()> {
            let mut a = start;
            for _ in 0..2000 {
                let left = if step > 0.0 { a } else { a - 1.0 };
                let add = panel(left);
                *total += add;
                if add.abs() <= 1e-17 * total.abs().max(1e-300) {
                    return Ok(());
                }
                a += step;
            }
            Err(Error::DivergentIntegral("log-scale tail does not decay".into()))
        };
        tail(hi, 1.0, &mut total)?;
        tail(lo, -1.0, &mut total)?;
        Ok(total)
    }

    /// C_g by adaptive Simpson quadrature in u = ln x over a truncated range.
    pub fn cg_adaptive_simpson(&self) -> Result<f64> {
        let f = |u: f64| {
            let g = self.eval(u.exp()).expect("positive argument");
            g * g
        };
        let mut total = 0.0;
        let mut cuts: Vec<f64> = self
            .pieces
            .iter()
            .map(|p| p.end)
            .filter(|x| x.is_finite() && *x > 0.0)
            .map(f64::ln)
            .collect();
        // Extend in unit steps until the end panels are negligible.
        let (mut lo, mut hi) = (
            cuts.first().copied().unwrap_or(0.0),
            cuts.last().copied().unwrap_or(0.0),
        );
        for _ in 0..2000 {
            let left = adaptive_simpson(&f, lo - 1.0, lo, 1e-15, 50);
            cuts.insert(0, lo - 1.0);
            lo -= 1.0;
            if left <= 1e-18 {
                break;
            }
        }
        for _ in 0..2000 {
            let right = adaptive_simpson(&f, hi, hi + 1.0, 1e-15, 50);
            cuts.push(hi + 1.0);
            hi += 1.0;
            if right <= 1e-18 {
                break;
            }
        }
        for w in cuts.windows(2) {
            total += adaptive_simpson(&f, w[0], w[1], 1e-15, 50);
        }
        if !total.is_finite() {
            return Err(Error::DivergentIntegral("non-finite quadrature".into()));
        }
        Ok(total)
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_breakpoints() {
        let g = default_kernel();
        assert_eq!(g.eval(0.0).unwrap(), 0.0);
        assert!((g.eval(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((g.eval(2.0).unwrap() - 1.0).abs() < 1e-15);
        for gap in g.breakpoint_gaps() {
            assert!(gap.value_gap < 1e-12 && gap.derivative_gap < 1e-12, "{gap:?}");
        }
        assert!((g.derivative(0.999_999_999).unwrap() - 2.0).abs() < 1e-6);
        assert_eq!(g.eval(-1.0).unwrap_err().kind(), "negative-argument");
    }

    #[test]
    fn positive_on_grid() {
        let g = default_kernel();
        for i in 1..10_000 {
            assert!(g.eval(i as f64 * 1e-3).unwrap() > 0.0);
        }
    }

    #[test]
    fn cg_agrees() {
        let g = default_kernel();
        let exact = g.cg_constant().unwrap();
        let gl = g.cg_gauss_legendre().unwrap();
        let simpson = g.cg_adaptive_simpson().unwrap();
        assert!((exact - gl).abs() < 1e-10, "{exact} {gl}");
        assert!((exact - simpson).abs() < 1e-8, "{exact} {simpson}");
        let outer = default_kernel().pieces[0].piece.log_energy(0.0, 1.0).unwrap();
        assert!((outer - 0.25).abs() < 1e-15);
        let tail = default_kernel().pieces[2].piece.log_energy(2.0, f64::INFINITY).unwrap();
        assert!((tail - 0.25).abs() < 1e-15);
        assert!((g.scaled(3.0).cg_constant().unwrap() - 9.0 * exact).abs() < 1e-12);
    }

    #[test]
    fn divergent_kernel() {
        let g = KernelSpec {
            pieces: vec![KernelPiece {
                start: 0.0,
                end: f64::INFINITY,
                piece: Piece::Polynomial(vec![1.0]),
            }],
            vanishing_order: 0,
        };
        assert_eq!(g.cg_constant().unwrap_err().kind(), "divergent-integral");
    }

    #[test]
    fn vanishing_order_profile() {
        let g = default_kernel();
        for r in g.vanishing_profile(&[1e-1, 1e-3, 1e-6]).unwrap() {
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_legendre_exact_on_polynomials() {
        let (x, w) = gauss_legendre(5);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((integral - 2.0 / 9.0).abs() < 1e-14);
    }
}
