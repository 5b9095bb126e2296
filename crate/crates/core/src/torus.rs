//! Geometry of the ring torus and of straight lines wound onto it.
//!
//! The canonical model is the flat square `[0, 2π)²` with opposite edges
//! identified; [`Torus::embed`] is only a view of it in three dimensions.
//! `r` always denotes the minor (tube) radius and `R` the major radius.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::rational::{rational_reconstruct, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error("torus radii must satisfy R > r > 0 (got R = {major}, r = {minor})")]
    InvalidRadii { major: f64, minor: f64 },
    #[error("slopes (a, b) must not both be zero")]
    ZeroDirection,
    #[error("integration needs t_max > 0 and 0 < h <= t_max (got t_max = {t_max}, h = {h})")]
    InvalidStep { t_max: f64, h: f64 },
    #[error("non-finite state at integration step {step}")]
    NumericalFailure { step: usize },
    #[error("{0}")]
    InvalidArgument(&'static str),
}

/// Ring torus with major radius `R` and minor radius `r`, `R > r > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torus {
    major: f64,
    minor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Coefficients `(E, F, G)` of the first fundamental form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

/// The two non-zero Christoffel symbols of the second kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffels {
    /// `Γ^u_uv` (= `Γ^u_vu`).
    pub u_uv: f64,
    /// `Γ^v_uu`.
    pub v_uu: f64,
}

impl Torus {
    pub fn new(major: f64, minor: f64) -> Result<Self, TorusError> {
        if major.is_finite() && minor.is_finite() && minor > 0.0 && major > minor {
            Ok(Torus { major, minor })
        } else {
            Err(TorusError::InvalidRadii { major, minor })
        }
    }

    pub fn major(&self) -> f64 {
        self.major
    }

    pub fn minor(&self) -> f64 {
        self.minor
    }

    /// Distance from the symmetry axis, `R + r cos v`. Always positive.
    fn ring(&self, v: f64) -> f64 {
        self.major + self.minor * v.cos()
    }

    pub fn embed(&self, p: SurfacePoint) -> Point3 {
        self.embed_angles(p.u, p.v)
    }

    /// Embedding for angles that need not be reduced.
    pub fn embed_angles(&self, u: f64, v: f64) -> Point3 {
        let w = self.ring(v);
        Point3 {
            x: w * u.cos(),
            y: w * u.sin(),
            z: self.minor * v.sin(),
        }
    }

    /// The square rolled up along `v` only: an open cylinder of radius `r`
    /// whose length `2πR` matches the torus' long circumference.
    pub fn embed_cylinder(&self, p: SurfacePoint) -> Point3 {
        Point3 {
            x: self.minor * p.v.cos(),
            y: self.minor * p.v.sin(),
            z: self.major * p.u,
        }
    }

    /// Residual of the implicit equation `(sqrt(x²+y²) - R)² + z² - r²`.
    pub fn implicit_residual(&self, p: Point3) -> f64 {
        let rho = p.x.hypot(p.y) - self.major;
        rho * rho + p.z * p.z - self.minor * self.minor
    }

    pub fn first_fundamental_form(&self, v: f64) -> FundamentalForm {
        let w = self.ring(v);
        FundamentalForm {
            e: w * w,
            f: 0.0,
            g: self.minor * self.minor,
        }
    }

    /// Closed forms obtained from the metric:
    /// `Γ^u_uv = E_v / 2E` and `Γ^v_uu = -E_v / 2G`.
    pub fn christoffels(&self, v: f64) -> Christoffels {
        let w = self.ring(v);
        let s = v.sin();
        Christoffels {
            u_uv: -self.minor * s / w,
            v_uu: s * w / self.minor,
        }
    }

    /// Conserved `(k, energy)` of a geodesic state:
    /// `k = u̇ (R + r cos v)²` and `energy = (R + r cos v)² u̇² + r² v̇²`.
    pub fn conserved_quantities(&self, s: &GeodesicState) -> (f64, f64) {
        let form = self.first_fundamental_form(s.v);
        let k = s.du * form.e;
        let energy = form.e * s.du * s.du + form.g * s.dv * s.dv;
        (k, energy)
    }

    pub fn geodesic_rhs(&self, s: &GeodesicState) -> GeodesicState {
        rhs_with(self, s, &|t: &Torus, v| t.christoffels(v))
    }
}

/// Angular coordinates reduced into `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub u: f64,
    pub v: f64,
}

/// Reduces an angle into `[0, 2π)`.
pub fn reduce_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles measured around the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = reduce_angle(a - b);
    d.min(TAU - d)
}

impl SurfacePoint {
    pub fn new(u: f64, v: f64) -> Self {
        SurfacePoint {
            u: reduce_angle(u),
            v: reduce_angle(v),
        }
    }

    /// Coordinates on the unit square, each in `[0, 1)`.
    pub fn to_unit_square(self) -> (f64, f64) {
        (self.u / TAU, self.v / TAU)
    }

    /// Largest per-angle circular distance to `other`.
    pub fn distance(self, other: SurfacePoint) -> f64 {
        angle_distance(self.u, other.u).max(angle_distance(self.v, other.v))
    }
}

/// Position and angular velocity along a geodesic. Angles are not reduced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
}

impl GeodesicState {
    pub fn new(u: f64, v: f64, du: f64, dv: f64) -> Self {
        GeodesicState { u, v, du, dv }
    }

    fn axpy(&self, h: f64, d: &GeodesicState) -> GeodesicState {
        GeodesicState {
            u: self.u + h * d.u,
            v: self.v + h * d.v,
            du: self.du + h * d.du,
            dv: self.dv + h * d.dv,
        }
    }

    fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.du.is_finite() && self.dv.is_finite()
    }

    pub fn surface_point(&self) -> SurfacePoint {
        SurfacePoint::new(self.u, self.v)
    }
}

fn rhs_with<C>(torus: &Torus, s: &GeodesicState, symbols: &C) -> GeodesicState
where
    C: Fn(&Torus, f64) -> Christoffels,
{
    let c = symbols(torus, s.v);
    GeodesicState {
        u: s.du,
        v: s.dv,
        du: -2.0 * c.u_uv * s.du * s.dv,
        dv: -c.v_uu * s.du * s.du,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: GeodesicState,
    pub point: Point3,
    pub k: f64,
    pub energy: f64,
}

/// Integrated geodesic with conserved-quantity monitoring.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// Largest relative deviation of `k` from its initial value.
    pub k_drift: f64,
    /// Largest relative deviation of the energy from its initial value.
    pub energy_drift: f64,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples
            .last()
            .expect("trajectory has at least one sample")
    }
}

fn relative_drift(q: f64, q0: f64) -> f64 {
    let d = (q - q0).abs();
    if q0 == 0.0 {
        d
    } else {
        d / q0.abs()
    }
}

/// Classical fixed-step RK4 integration of the geodesic equations.
pub fn integrate_geodesic(
    torus: &Torus,
    s0: GeodesicState,
    t_max: f64,
    h: f64,
) -> Result<Trajectory, TorusError> {
    integrate_geodesic_with(torus, s0, t_max, h, |t: &Torus, v| t.christoffels(v))
}

/// [`integrate_geodesic`] with a caller-supplied connection, e.g. to check
/// that an alternative pair of symbols fails to conserve `k`.
pub fn integrate_geodesic_with<C>(
    torus: &Torus,
    s0: GeodesicState,
    t_max: f64,
    h: f64,
    symbols: C,
) -> Result<Trajectory, TorusError>
where
    C: Fn(&Torus, f64) -> Christoffels,
{
    if !(t_max > 0.0 && h > 0.0 && h <= t_max && t_max.is_finite()) {
        return Err(TorusError::InvalidStep { t_max, h });
    }
    if !s0.is_finite() {
        return Err(TorusError::NumericalFailure { step: 0 });
    }
    // Guard against a sliver step when t_max / h is integral up to rounding.
    let steps = ((t_max / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let (k0, e0) = torus.conserved_quantities(&s0);
    let sample = |t: f64, s: GeodesicState| {
        let (k, energy) = torus.conserved_quantities(&s);
        TrajectorySample {
            t,
            state: s,
            point: torus.embed_angles(s.u, s.v),
            k,
            energy,
        }
    };

    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(sample(0.0, s0));
    let (mut k_drift, mut energy_drift) = (0.0f64, 0.0f64);
    let mut s = s0;
    let mut t = 0.0;
    for i in 1..=steps {
        let t_next = if i == steps { t_max } else { i as f64 * h };
        let dt = t_next - t;
        let k1 = rhs_with(torus, &s, &symbols);
        let k2 = rhs_with(torus, &s.axpy(0.5 * dt, &k1), &symbols);
        let k3 = rhs_with(torus, &s.axpy(0.5 * dt, &k2), &symbols);
        let k4 = rhs_with(torus, &s.axpy(dt, &k3), &symbols);
        s = GeodesicState {
            u: s.u + dt / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            v: s.v + dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
            du: s.du + dt / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du),
            dv: s.dv + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
        };
        if !s.is_finite() {
            return Err(TorusError::NumericalFailure { step: i });
        }
        t = t_next;
        let smp = sample(t, s);
        k_drift = k_drift.max(relative_drift(smp.k, k0));
        energy_drift = energy_drift.max(relative_drift(smp.energy, e0));
        if !(smp.k.is_finite() && smp.energy.is_finite()) {
            return Err(TorusError::NumericalFailure { step: i });
        }
        samples.push(smp);
    }
    Ok(Trajectory {
        samples,
        k_drift,
        energy_drift,
    })
}

/// Straight line `u = a t + u0`, `v = b t + v0` wound onto the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct WindingLine {
    pub a: f64,
    pub b: f64,
    pub u0: f64,
    pub v0: f64,
    exact: Option<(Rational, Rational)>,
}

/// Period of a closed winding line.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosurePeriod {
    /// Smallest `T > 0` with `γ(T) = γ(0)`.
    pub period: f64,
    /// `T / 2π` when the slopes were given exactly.
    pub turns: Option<Rational>,
    /// True when closure was inferred by rational reconstruction of a
    /// floating-point slope ratio.
    pub heuristic: bool,
}

/// Denominator cap used to decide closure for floating-point slopes.
pub const CLOSURE_MAX_DEN: u64 = 1_000_000;

impl WindingLine {
    pub fn new(a: f64, b: f64, u0: f64, v0: f64) -> Result<Self, TorusError> {
        if !(a.is_finite() && b.is_finite() && u0.is_finite() && v0.is_finite()) {
            return Err(TorusError::InvalidArgument(
                "winding line parameters must be finite",
            ));
        }
        if a == 0.0 && b == 0.0 {
            return Err(TorusError::ZeroDirection);
        }
        Ok(WindingLine {
            a,
            b,
            u0,
            v0,
            exact: None,
        })
    }

    /// A line whose slopes are known exactly; closure is then decided exactly.
    pub fn from_rational(a: Rational, b: Rational, u0: f64, v0: f64) -> Result<Self, TorusError> {
        let mut line = WindingLine::new(a.to_f64(), b.to_f64(), u0, v0)?;
        if a.is_zero() && b.is_zero() {
            return Err(TorusError::ZeroDirection);
        }
        line.exact = Some((a, b));
        Ok(line)
    }

    pub fn exact_slopes(&self) -> Option<&(Rational, Rational)> {
        self.exact.as_ref()
    }

    pub fn point(&self, t: f64) -> SurfacePoint {
        SurfacePoint::new(self.a * t + self.u0, self.b * t + self.v0)
    }

    pub fn closure_period(&self) -> Option<ClosurePeriod> {
        if let Some((a, b)) = &self.exact {
            let turns = closure_turns_exact(a, b).expect("direction checked at construction");
            return Some(ClosurePeriod {
                period: TAU * turns.to_f64(),
                turns: Some(turns),
                heuristic: false,
            });
        }
        let (small, big) = {
            let (x, y) = (self.a.abs(), self.b.abs());
            (x.min(y), x.max(y))
        };
        if small == 0.0 {
            return Some(ClosurePeriod {
                period: TAU / big,
                turns: None,
                heuristic: false,
            });
        }
        let ratio = small / big;
        let tol = 4.0 * f64::EPSILON * ratio;
        let r = rational_reconstruct(ratio, CLOSURE_MAX_DEN, tol)?;
        // big = s * q with q the reduced denominator; the period is 2π / s.
        let q = r.denom().clone();
        let q = Rational::from_integer(q).to_f64();
        Some(ClosurePeriod {
            period: TAU * q / big,
            turns: None,
            heuristic: true,
        })
    }
}

/// Smallest `τ > 0` with `aτ` and `bτ` both integers; the closure period of
/// the line is `2πτ`.
///
/// For reduced non-zero slopes `p1/q1`, `p2/q2` this is
/// `lcm(q1, q2) / gcd(|p1|, |p2|)`.
pub fn closure_turns_exact(a: &Rational, b: &Rational) -> Result<Rational, TorusError> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Signed;
    let nonzero: Vec<&Rational> = [a, b].into_iter().filter(|r| !r.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return Err(TorusError::ZeroDirection);
    };
    let mut num: BigInt = first.denom().clone();
    let mut den: BigInt = first.numer().abs();
    for r in &nonzero[1..] {
        num = num.lcm(r.denom());
        den = den.gcd(&r.numer().abs());
    }
    Ok(Rational::new(num, den).expect("non-zero slope numerator"))
}

/// The angle wrap `(x, y) -> (2πx mod 2π, 2πy mod 2π)` of the unit square.
pub fn wrap_map(x: f64, y: f64) -> Result<SurfacePoint, TorusError> {
    if !((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)) {
        return Err(TorusError::InvalidArgument("wrap_map needs x, y in [0, 1]"));
    }
    Ok(SurfacePoint::new(TAU * x, TAU * y))
}

/// [`wrap_map`] on exact inputs, returning the angles as exact multiples
/// of a full turn: `u = 2π · turns.0`, `v = 2π · turns.1`.
pub fn wrap_turns_exact(x: &Rational, y: &Rational) -> (Rational, Rational) {
    (x.fract(), y.fract())
}

/// Fraction of cells of a `grid_n × grid_n` partition of the angle square
/// visited by the line over `[0, t_max]`.
pub fn density_coverage(line: &WindingLine, t_max: f64, grid_n: usize) -> Result<f64, TorusError> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(TorusError::InvalidArgument(
            "t_max must be positive and finite",
        ));
    }
    if grid_n < 2 {
        return Err(TorusError::InvalidArgument("grid_n must be at least 2"));
    }
    let cell = TAU / grid_n as f64;
    let speed = line.a.abs().max(line.b.abs());
    // Consecutive samples move at most half a cell along either axis.
    let dt = 0.5 * cell / speed;
    let steps = (t_max / dt).ceil() as usize;
    let mut visited = vec![false; grid_n * grid_n];
    let index = |angle: f64| ((angle / cell) as usize).min(grid_n - 1);
    for i in 0..=steps {
        let t = (i as f64 * dt).min(t_max);
        let p = line.point(t);
        visited[index(p.u) * grid_n + index(p.v)] = true;
    }
    let hit = visited.iter().filter(|&&c| c).count();
    Ok(hit as f64 / (grid_n * grid_n) as f64)
}
