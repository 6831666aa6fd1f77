//! Nemytskii drifts `F(x)(xi) = b(xi, x(xi)) [+ g(max_{[0,xi]} |x|)]` with
//!
//! ```text
//! b(xi, s) = -C_{2m+1}(xi) s^{2m+1} + sum_{k <= 2m} C_k(xi) s^k,   C_{2m+1} > 0,
//! ```
//!
//! their dissipativity shift `zeta_F`, and the Yosida regularization.

mod polynomial;
mod yosida;

pub use yosida::{yosida_drift, yosida_resolvent, YosidaParams};

use crate::error::{check_len, invalid, Error, Result};
use crate::scalar::{lit, Real};
use crate::spectral::{GridFunction, SpaceTag, SpectralOperator};

/// Lipschitz scalar function applied to the running maximum of `|x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxTerm<T> {
    /// `g(s) = slope * s`.
    Linear { slope: T },
    /// `g(s) = amplitude * sin(s)`.
    Sine { amplitude: T },
}

impl<T: Real> MaxTerm<T> {
    pub fn eval(&self, s: T) -> T {
        match *self {
            MaxTerm::Linear { slope } => slope * s,
            MaxTerm::Sine { amplitude } => amplitude * s.sin(),
        }
    }

    pub fn lipschitz(&self) -> T {
        match *self {
            MaxTerm::Linear { slope } => slope.abs(),
            MaxTerm::Sine { amplitude } => amplitude.abs(),
        }
    }
}

/// Polynomial coefficients, constant in space or one list per grid point.
#[derive(Debug, Clone, PartialEq)]
enum Coefficients<T> {
    Constant(Vec<T>),
    PerPoint(Vec<Vec<T>>),
}

/// A dissipative Nemytskii drift with its computed shift `zeta_F`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSpec<T> {
    // Ascending standard-form coefficients of b(xi, .), i.e. with the sign of
    // the leading term already applied.
    coeffs: Coefficients<T>,
    max_term: Option<MaxTerm<T>>,
    zeta_f: T,
    // zeta of the polynomial part alone.
    zeta_poly: T,
}

/// Converts `C_0, ..., C_{2m+1}` into ascending standard coefficients.
fn standard_form<T: Real>(c: &[T]) -> Result<Vec<T>> {
    if c.iter().any(|x| !x.is_finite()) {
        return Err(invalid("drift coefficients must be finite"));
    }
    let c = polynomial::trim(c);
    if c.is_empty() {
        return Ok(Vec::new());
    }
    let top = c.len() - 1;
    if top.is_multiple_of(2) {
        return Err(invalid(format!("leading degree {top} of the drift polynomial must be odd")));
    }
    if !(c[top] > T::zero()) {
        return Err(invalid("leading drift coefficient C_{2m+1} must be strictly positive"));
    }
    let mut p = c.to_vec();
    p[top] = -p[top];
    Ok(p)
}

fn poly_zeta<T: Real>(p: &[T]) -> Result<T> {
    polynomial::global_max(&polynomial::derivative(p))
        .ok_or_else(|| invalid("derivative of the drift polynomial is unbounded above"))
}

impl<T: Real> DriftSpec<T> {
    /// Spatially constant drift from `C_0, ..., C_{2m+1}` (sign convention
    /// above). An empty or all-zero list is the zero drift.
    pub fn new(c: &[T]) -> Result<Self> {
        let p = standard_form(c)?;
        let zeta = poly_zeta(&p)?;
        Ok(Self {
            coeffs: Coefficients::Constant(p),
            max_term: None,
            zeta_f: zeta,
            zeta_poly: zeta,
        })
    }

    /// One coefficient list per grid point, in grid order.
    pub fn per_point(c: &[Vec<T>]) -> Result<Self> {
        if c.is_empty() {
            return Err(invalid("per-point coefficient table is empty"));
        }
        let ps: Vec<Vec<T>> = c.iter().map(|ci| standard_form(ci)).collect::<Result<_>>()?;
        let zeta = ps
            .iter()
            .map(|p| poly_zeta(p))
            .collect::<Result<Vec<T>>>()?
            .into_iter()
            .fold(T::neg_infinity(), T::max);
        Ok(Self {
            coeffs: Coefficients::PerPoint(ps),
            max_term: None,
            zeta_f: zeta,
            zeta_poly: zeta,
        })
    }

    pub fn zero() -> Self {
        Self::new(&[]).expect("zero drift is valid")
    }

    /// Adds `g(max_{[0,xi]} |x|)`; `zeta_F` grows by `Lip(g)`.
    pub fn with_max_term(mut self, g: MaxTerm<T>) -> Self {
        self.max_term = Some(g);
        self.zeta_f = self.zeta_poly + g.lipschitz();
        self
    }

    pub fn max_term(&self) -> Option<MaxTerm<T>> {
        self.max_term
    }

    /// `zeta_F`: the maximum over grid points of `sup_s d/ds b(xi, s)`, plus
    /// `Lip(g)` when a max term is present.
    pub fn dissipativity_constant(&self) -> T {
        self.zeta_f
    }

    pub fn is_zero(&self) -> bool {
        self.max_term.is_none() && matches!(&self.coeffs, Coefficients::Constant(p) if p.is_empty())
    }

    /// Odd degree `2m+1` of the polynomial part (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        match &self.coeffs {
            Coefficients::Constant(p) => p.len().saturating_sub(1),
            Coefficients::PerPoint(ps) => ps.iter().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0),
        }
    }

    pub(crate) fn poly_at(&self, j: usize) -> &[T] {
        match &self.coeffs {
            Coefficients::Constant(p) => p,
            Coefficients::PerPoint(ps) => &ps[j],
        }
    }

    fn check_grid(&self, g: &GridFunction<T>) -> Result<()> {
        if let Coefficients::PerPoint(ps) = &self.coeffs {
            check_len(ps.len(), g.len())?;
        }
        if self.max_term.is_some() {
            if g.dim() != 1 {
                return Err(invalid("the running-max drift term is defined only in dimension 1"));
            }
            if g.space() != SpaceTag::ContinuousSup {
                return Err(invalid("the running-max drift term requires the sup-norm space"));
            }
        }
        Ok(())
    }

    /// `b(xi_j, s)` at grid point `j`.
    pub fn b(&self, j: usize, s: T) -> T {
        polynomial::eval(self.poly_at(j), s)
    }

    /// `d/ds b(xi_j, s)`.
    pub fn b_prime(&self, j: usize, s: T) -> T {
        let p = self.poly_at(j);
        p.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(T::zero(), |acc, (k, &c)| acc * s + T::from_usize(k).unwrap() * c)
    }

    /// Pointwise evaluation of `F(x)`.
    pub fn eval(&self, x: &GridFunction<T>) -> Result<GridFunction<T>> {
        self.check_grid(x)?;
        let mut out = x.clone();
        for (j, v) in out.values_mut().iter_mut().enumerate() {
            *v = self.b(j, *v);
        }
        if let Some(g) = self.max_term {
            add_max_term(g, x.values(), out.values_mut());
        }
        Ok(out)
    }

    /// A root `x_0` of `F(x_0) = zeta_F x_0`, chosen per grid point as the
    /// real root of `b(xi, s) - zeta_F s` nearest to zero. Absent with a max
    /// term, which couples the grid points.
    pub fn fixed_point(&self, op: &SpectralOperator<T>, space: SpaceTag) -> Result<Option<GridFunction<T>>> {
        if self.max_term.is_some() {
            return Ok(None);
        }
        if let Coefficients::PerPoint(ps) = &self.coeffs {
            check_len(ps.len(), op.len())?;
        }
        let mut values = Vec::with_capacity(op.len());
        for j in 0..op.len() {
            let mut p = self.poly_at(j).to_vec();
            if p.len() < 2 {
                p.resize(2, T::zero());
            }
            p[1] = p[1] - self.zeta_f;
            let root = if polynomial::trim(&p).is_empty() {
                T::zero()
            } else {
                polynomial::real_roots(&p)
                    .into_iter()
                    .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
                    .ok_or_else(|| Error::Hypotheses("no real fixed point of b(s) - zeta s".into()))?
            };
            values.push(root);
        }
        GridFunction::new(op.dim(), op.modes_per_axis(), values, space).map(Some)
    }

    /// Constant `C` of the weak-continuity estimate
    /// `|<F(x_n) - F(x), h>| <= C |x - x_n|_H |h|_E (|x_n|_E^{p-1} + |x|_E^{p-1} [+ 2])`,
    /// where `p` is the degree and the `+ 2` is present only when `b` has
    /// lower-order terms. From `|a^k - b^k| <= (k/2) |a - b| (|a|^{k-1} + |b|^{k-1})`,
    /// `C = sum_k k |c_k| / 2` with `c_k` the largest coefficients over the grid.
    pub fn weak_continuity_constant(&self) -> T {
        let n = self.degree() + 1;
        let mut c = vec![T::zero(); n];
        let lists: Vec<&[T]> = match &self.coeffs {
            Coefficients::Constant(p) => vec![p.as_slice()],
            Coefficients::PerPoint(ps) => ps.iter().map(|p| p.as_slice()).collect(),
        };
        for p in lists {
            for (k, &v) in p.iter().enumerate() {
                c[k] = c[k].max(v.abs());
            }
        }
        c.iter()
            .enumerate()
            .map(|(k, &v)| T::from_usize(k).unwrap() * v)
            .sum::<T>()
            * lit(0.5)
    }

    /// Whether `b` has nonzero coefficients below the leading one.
    pub fn has_lower_order_terms(&self) -> bool {
        let has = |p: &[T]| p.iter().rev().skip(1).any(|&c| c != T::zero());
        match &self.coeffs {
            Coefficients::Constant(p) => has(p),
            Coefficients::PerPoint(ps) => ps.iter().any(|p| has(p)),
        }
    }

    /// Right-hand side of the weak-continuity estimate for the triple
    /// `(x_n, x, h)`; E-norms are taken in the space tag of `h`.
    pub fn weak_continuity_bound(
        &self,
        xn: &GridFunction<T>,
        x: &GridFunction<T>,
        h: &GridFunction<T>,
    ) -> Result<T> {
        let p = self.degree();
        if p == 0 {
            return Ok(T::zero());
        }
        let e = |g: &GridFunction<T>| g.clone().with_space(h.space()).space_norm();
        let pm1 = (p - 1) as i32;
        let extra = if self.has_lower_order_terms() { lit(2.0) } else { T::zero() };
        let dist = x.sub(xn)?.h_norm();
        Ok(self.weak_continuity_constant() * dist * e(h) * (e(xn).powi(pm1) + e(x).powi(pm1) + extra))
    }
}

fn add_max_term<T: Real>(g: MaxTerm<T>, x: &[T], out: &mut [T]) {
    let mut running = T::zero();
    for (o, &v) in out.iter_mut().zip(x) {
        running = running.max(v.abs());
        *o = *o + g.eval(running);
    }
}

/// `F(x)`; see [`DriftSpec::eval`].
pub fn eval_drift<T: Real>(f: &DriftSpec<T>, x: &GridFunction<T>) -> Result<GridFunction<T>> {
    f.eval(x)
}

/// `zeta_F`; see [`DriftSpec::dissipativity_constant`].
pub fn dissipativity_constant<T: Real>(f: &DriftSpec<T>) -> T {
    f.dissipativity_constant()
}
