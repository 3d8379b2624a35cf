//! Even test functions with compactly supported Fourier transform, and the
//! archimedean integrals they enter.
//!
//! The Fourier normalization is phihat(y) = integral phi(x) e^(-2 pi i x y) dx.
//! Two families are provided:
//!
//! * `Fejer`: phi(x) = scale * sigma * sinc^2(sigma x) with the triangular
//!   transform phihat(y) = scale * max(0, 1 - |y|/sigma). phi is not
//!   Schwartz (it decays like x^-2), but every integral used here converges
//!   absolutely; the pair has closed forms on both sides, which is what the
//!   oracle tests lean on.
//! * `PiecewiseLinearHat`: phihat is an even piecewise-linear function
//!   vanishing for |y| >= sigma, given by knots; phi is recovered exactly by
//!   per-segment integration.
//!
//! Support is enforced exactly: `phihat` returns literal zero for
//! |y| >= sigma.

use crate::quad;
use crate::real::Real;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunctionKind {
    Fejer,
    PiecewiseLinearHat,
}

/// Symmetry types of the classical compact groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Symmetry {
    SOeven,
    SOodd,
    O,
    USp,
    U,
}

/// Predicted one-level-density value for a symmetry type, valid for test
/// functions with transform supported in (-1, 1):
/// phihat(0) + phi(0)/2 for the orthogonal types, phihat(0) - phi(0)/2 for
/// USp and phihat(0) for U.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryPrediction<T> {
    pub symmetry: Symmetry,
    pub value: T,
}

#[derive(Debug, Clone)]
pub struct TestFunction<T> {
    sigma: T,
    scale: T,
    kind: TestFunctionKind,
    /// Knots of phihat restricted to y >= 0 (evenness makes the negative
    /// side redundant); empty for the Fejer kind.
    knots: Vec<(T, T)>,
}

impl<T: Real> TestFunction<T> {
    /// Fejer pair of half-width `sigma`, multiplied by `scale`.
    pub fn fejer(sigma: T, scale: T) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(TestFunction {
            sigma,
            scale,
            kind: TestFunctionKind::Fejer,
            knots: Vec::new(),
        })
    }

    /// Piecewise-linear hat from explicit (y, phihat(y)) knots.
    ///
    /// Knots must be strictly increasing in y, symmetric under y -> -y with
    /// equal values, contained in [-sigma, sigma], and vanish at the
    /// outermost knots. `scale` multiplies the given values.
    pub fn piecewise_linear_hat(sigma: T, scale: T, knots: &[(T, T)]) -> Result<Self> {
        check_sigma(sigma)?;
        if knots.len() < 3 {
            return Err(Error::InvalidKnots(
                "need at least 3 knots for an even hat".into(),
            ));
        }
        let mut sorted = knots.to_vec();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("knot y must not be NaN"));
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidKnots("duplicate knot ordinate".into()));
            }
        }
        let n = sorted.len();
        for i in 0..n {
            let (y_lo, v_lo) = sorted[i];
            let (y_hi, v_hi) = sorted[n - 1 - i];
            if (y_lo + y_hi).abs() > T::of(1e-12) || (v_lo - v_hi).abs() > T::of(1e-12) {
                return Err(Error::InvalidKnots(format!(
                    "knots are not even: ({y_lo}, {v_lo}) vs ({y_hi}, {v_hi})"
                )));
            }
        }
        let y_max = sorted[n - 1].0;
        if y_max > sigma {
            return Err(Error::InvalidKnots(format!(
                "knot at |y| = {y_max} lies outside the support bound sigma = {sigma}"
            )));
        }
        if sorted[n - 1].1 != T::zero() {
            return Err(Error::InvalidKnots(
                "outermost knots must vanish so the hat is continuous".into(),
            ));
        }
        // keep the non-negative half; synthesize y = 0 if absent
        let mut half: Vec<(T, T)> = Vec::new();
        if sorted.iter().all(|&(y, _)| y != T::zero()) {
            // the segment crossing 0 joins (-y1, v1) to (y1, v1); constant v1
            let first_pos = sorted.iter().find(|&&(y, _)| y > T::zero()).unwrap();
            half.push((T::zero(), first_pos.1));
        }
        for &(y, v) in &sorted {
            if y >= T::zero() {
                half.push((y, v));
            }
        }
        Ok(TestFunction {
            sigma,
            scale,
            kind: TestFunctionKind::PiecewiseLinearHat,
            knots: half,
        })
    }

    /// Parse knots from two-column CSV text `y,value` (one pair per line,
    /// `#` comments and blank lines allowed) and build the hat.
    pub fn piecewise_from_csv(sigma: T, scale: T, csv: &str) -> Result<Self> {
        let mut knots = Vec::new();
        for (lineno, raw) in csv.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(',');
            let parse = |field: Option<&str>| -> Result<T> {
                field
                    .map(str::trim)
                    .and_then(|s| s.parse::<f64>().ok())
                    .map(T::of)
                    .ok_or_else(|| {
                        Error::InvalidKnots(format!("line {}: expected `y,value`", lineno + 1))
                    })
            };
            let y = parse(cols.next())?;
            let v = parse(cols.next())?;
            if cols.next().is_some() {
                return Err(Error::InvalidKnots(format!(
                    "line {}: more than two columns",
                    lineno + 1
                )));
            }
            knots.push((y, v));
        }
        Self::piecewise_linear_hat(sigma, scale, &knots)
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn kind(&self) -> TestFunctionKind {
        self.kind
    }

    /// phi(x).
    pub fn phi(&self, x: T) -> T {
        match self.kind {
            TestFunctionKind::Fejer => {
                let u = T::pi() * self.sigma * x;
                let s = if u == T::zero() { T::one() } else { u.sin() / u };
                self.scale * self.sigma * s * s
            }
            TestFunctionKind::PiecewiseLinearHat => {
                // phi(x) = 2 * integral_0^sigma phihat(y) cos(2 pi x y) dy,
                // exactly per linear segment
                let c = T::two() * T::pi() * x;
                let mut acc = T::zero();
                for w in self.knots.windows(2) {
                    let (y0, v0) = w[0];
                    let (y1, v1) = w[1];
                    acc = acc + segment_cos_integral(y0, v0, y1, v1, c);
                }
                T::two() * self.scale * acc
            }
        }
    }

    /// phihat(y); exactly zero for |y| >= sigma.
    pub fn phihat(&self, y: T) -> T {
        let ay = y.abs();
        if ay >= self.sigma {
            return T::zero();
        }
        match self.kind {
            TestFunctionKind::Fejer => self.scale * (T::one() - ay / self.sigma),
            TestFunctionKind::PiecewiseLinearHat => {
                let last = match self.knots.last() {
                    Some(&(y_max, _)) => y_max,
                    None => return T::zero(),
                };
                if ay >= last {
                    return T::zero();
                }
                for w in self.knots.windows(2) {
                    let (y0, v0) = w[0];
                    let (y1, v1) = w[1];
                    if ay <= y1 {
                        let t = (ay - y0) / (y1 - y0);
                        return self.scale * (v0 + t * (v1 - v0));
                    }
                }
                T::zero()
            }
        }
    }

    pub fn phi0(&self) -> T {
        self.phi(T::zero())
    }

    pub fn phihat0(&self) -> T {
        self.phihat(T::zero())
    }

    /// Right derivative of phihat at 0, used for the removable singularity
    /// of the sinh integrand.
    fn phihat_slope0(&self) -> T {
        match self.kind {
            TestFunctionKind::Fejer => -self.scale / self.sigma,
            TestFunctionKind::PiecewiseLinearHat => {
                if self.knots.len() < 2 {
                    return T::zero();
                }
                let (y0, v0) = self.knots[0];
                let (y1, v1) = self.knots[1];
                self.scale * (v1 - v0) / (y1 - y0)
            }
        }
    }

    /// integral_0^inf (phihat(0) - phihat(x)) / (2 sinh(x/2)) dx.
    ///
    /// The integrand is extended by its limit -phihat'(0+) at x = 0. On
    /// [sigma, inf) the numerator is constant, so that piece is the exact
    /// tail phihat(0) * log(coth(sigma/4)); quadrature only runs on
    /// (0, sigma), split at the knots of phihat.
    pub fn sinh_integral(&self) -> Result<T> {
        if self.scale == T::zero() {
            return Ok(T::zero());
        }
        let hat0 = self.phihat0();
        let limit0 = -self.phihat_slope0();
        let f = |x: T| {
            if x.abs() < T::of(1e-9) {
                limit0
            } else {
                (hat0 - self.phihat(x)) / (T::two() * (x * T::half()).sinh())
            }
        };
        let (abs_tol, rel_tol) = quad_tols::<T>(1e-13, 1e-12);
        let mut total = T::zero();
        for (lo, hi) in self.segment_bounds() {
            total = total + quad::adaptive(f, lo, hi, abs_tol, rel_tol)?.value;
        }
        // exact tail: integral_a^inf dx/(2 sinh(x/2)) = log(coth(a/4))
        let quarter = self.sigma / T::of(4.0);
        let tail = (quarter.cosh() / quarter.sinh()).ln();
        Ok(total + hat0 * tail)
    }

    /// (4/h) * logDelta * integral_0^sigma phihat(u) cosh(u logDelta / 2) du,
    /// the trivial-character term of the averaged explicit formula after the
    /// change of variables u = x / logDelta.
    pub fn cosh_term(&self, h: u64, log_delta: T) -> Result<T> {
        assert!(h >= 1, "class number must be positive");
        assert!(log_delta > T::zero(), "logDelta must be positive");
        if self.scale == T::zero() {
            return Ok(T::zero());
        }
        let a = log_delta * T::half();
        let f = |u: T| self.phihat(u) * (a * u).cosh();
        let (abs_tol, rel_tol) = quad_tols::<T>(1e-14, 1e-10);
        let mut total = T::zero();
        for (lo, hi) in self.segment_bounds() {
            total = total + quad::adaptive(f, lo, hi, abs_tol, rel_tol)?.value;
        }
        Ok(T::of(4.0) / T::of_u64(h) * log_delta * total)
    }

    /// The five Katz-Sarnak one-level density constants for this function.
    pub fn symmetry_predictions(&self) -> [SymmetryPrediction<T>; 5] {
        let hat0 = self.phihat0();
        let half_phi0 = self.phi0() * T::half();
        let orth = hat0 + half_phi0;
        [
            SymmetryPrediction {
                symmetry: Symmetry::SOeven,
                value: orth,
            },
            SymmetryPrediction {
                symmetry: Symmetry::SOodd,
                value: orth,
            },
            SymmetryPrediction {
                symmetry: Symmetry::O,
                value: orth,
            },
            SymmetryPrediction {
                symmetry: Symmetry::USp,
                value: hat0 - half_phi0,
            },
            SymmetryPrediction {
                symmetry: Symmetry::U,
                value: hat0,
            },
        ]
    }

    /// The symplectic prediction phihat(0) - phi(0)/2, the limiting value of
    /// the one-level density for this family.
    pub fn usp_prediction(&self) -> T {
        self.phihat0() - self.phi0() * T::half()
    }

    /// Numeric inverse transform 2 * integral_0^sigma phihat(y) cos(2 pi x y) dy;
    /// Fourier inversion says this equals phi(x).
    pub fn fourier_inverse_at(&self, x: T) -> Result<T> {
        let c = T::two() * T::pi() * x;
        let f = |y: T| self.phihat(y) * (c * y).cos();
        let (abs_tol, rel_tol) = quad_tols::<T>(1e-13, 1e-12);
        let mut total = T::zero();
        for (lo, hi) in self.segment_bounds() {
            total = total + quad::adaptive(f, lo, hi, abs_tol, rel_tol)?.value;
        }
        Ok(T::two() * total)
    }

    /// Quadrature panels on [0, sigma] aligned with the kinks of phihat.
    fn segment_bounds(&self) -> Vec<(T, T)> {
        match self.kind {
            TestFunctionKind::Fejer => vec![(T::zero(), self.sigma)],
            TestFunctionKind::PiecewiseLinearHat => {
                let mut bounds: Vec<(T, T)> =
                    self.knots.windows(2).map(|w| (w[0].0, w[1].0)).collect();
                let y_max = self.knots.last().map(|&(y, _)| y).unwrap_or(self.sigma);
                if y_max < self.sigma {
                    bounds.push((y_max, self.sigma));
                }
                bounds
            }
        }
    }
}

fn check_sigma<T: Real>(sigma: T) -> Result<()> {
    if sigma <= T::zero() || sigma >= T::one() {
        return Err(Error::SigmaOutOfRange(sigma.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Quadrature tolerances for the scalar in use: the spec values in f64,
/// floored by what the type's epsilon can deliver (f32 runs coarser).
fn quad_tols<T: Real>(abs: f64, rel: f64) -> (T, T) {
    let floor = T::epsilon() * T::of(128.0);
    (T::of(abs).max(floor), T::of(rel).max(floor))
}

/// integral_{y0}^{y1} (v0 + s (y - y0)) cos(c y) dy with s the segment slope.
fn segment_cos_integral<T: Real>(y0: T, v0: T, y1: T, v1: T, c: T) -> T {
    let h = y1 - y0;
    if h == T::zero() {
        return T::zero();
    }
    let s = (v1 - v0) / h;
    if (c * h).abs() < T::of(0.25) {
        // nearly polynomial integrand: 5-node Gauss-Legendre is exact to
        // machine precision here
        const GL_X: [f64; 5] = [
            -0.906_179_845_938_663_9,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_663_9,
        ];
        const GL_W: [f64; 5] = [
            0.236_926_885_056_189_08,
            0.478_628_670_499_366_47,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
        ];
        let mid = (y0 + y1) * T::half();
        let rad = h * T::half();
        let mut acc = T::zero();
        for i in 0..5 {
            let y = mid + rad * T::of(GL_X[i]);
            acc = acc + T::of(GL_W[i]) * (v0 + s * (y - y0)) * (c * y).cos();
        }
        acc * rad
    } else {
        let (s0, c0) = ((c * y0).sin(), (c * y0).cos());
        let (s1, c1) = ((c * y1).sin(), (c * y1).cos());
        v0 * (s1 - s0) / c + s * (h * s1 / c + (c1 - c0) / (c * c))
    }
}
