//! Driving noises: cylindrical Wiener increments, finite-activity Levy jump
//! paths with their compensator, and diagonal alpha-stable coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};

use crate::error::{check_len, invalid, Result};
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::{SpectralOperator, SpectralVector};

/// Addressable random stream: `(master_seed, replica_index)` determines every
/// sample drawn from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub replica_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, replica_index: u64) -> Self {
        Self {
            master_seed,
            replica_index,
        }
    }

    /// Generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.replica_index);
        rng
    }

    /// Same replica, different named purpose. Distinct labels give
    /// statistically independent streams.
    pub fn substream(&self, label: u64) -> Self {
        Self {
            master_seed: splitmix64(self.master_seed ^ splitmix64(label.wrapping_add(0x5851_f42d_4c95_7f2d))),
            replica_index: self.replica_index,
        }
    }

    pub fn replica(&self, replica_index: u64) -> Self {
        Self {
            master_seed: self.master_seed,
            replica_index,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Substream labels reserved for the independent noise sources of one path.
pub(crate) mod labels {
    pub const WIENER: u64 = 1;
    pub const LEVY: u64 = 2;
    pub const STABLE: u64 = 3;
}

/// Parametric Levy measure families.
#[derive(Debug, Clone, PartialEq)]
pub enum LevyMeasure<T> {
    /// Mode of rank `n` jumps by `n^{-k}` along `e_n` at unit intensity.
    DiagonalPoisson { k: T },
    /// Atoms `(vector, intensity)`.
    FiniteAtomic { atoms: Vec<(SpectralVector<T>, T)> },
    /// Independent coordinates `sigma_n l_n(t)` with `sigma_n = amplitude n^{-beta}`
    /// and `l_n` standard symmetric alpha-stable.
    DiagonalAlphaStable { alpha: T, beta: T, amplitude: T },
}

/// A pure-jump Levy process: measure, drift `m`, and the `H`-norm threshold
/// separating compensated small jumps from big ones.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyModel<T> {
    pub measure: LevyMeasure<T>,
    pub drift: Option<SpectralVector<T>>,
    pub big_jump_threshold: T,
}

/// A jump of a realized path, either along a single mode or a full vector.
#[derive(Debug, Clone, PartialEq)]
pub enum JumpSize<T> {
    Mode { index: usize, magnitude: T },
    Vector(SpectralVector<T>),
}

impl<T: Real> JumpSize<T> {
    /// `coeffs += scale * self` with the mode-wise factors `weights` (if any).
    pub fn add_scaled(&self, coeffs: &mut [T], weight: impl Fn(usize) -> T) {
        match self {
            JumpSize::Mode { index, magnitude } => coeffs[*index] = coeffs[*index] + weight(*index) * *magnitude,
            JumpSize::Vector(v) => {
                for (i, (c, &x)) in coeffs.iter_mut().zip(v.coeffs()).enumerate() {
                    *c = *c + weight(i) * x;
                }
            }
        }
    }

    pub fn to_vector(&self, len: usize) -> SpectralVector<T> {
        let mut c = vec![T::zero(); len];
        self.add_scaled(&mut c, |_| T::one());
        SpectralVector::new(c).expect("finite jump")
    }

    fn h_norm(&self) -> T {
        match self {
            JumpSize::Mode { magnitude, .. } => magnitude.abs(),
            JumpSize::Vector(v) => v.norm(),
        }
    }
}

/// Realized jump trajectory on `(0, T]` plus the constant compensator drift.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpPath<T> {
    pub horizon: T,
    /// Strictly increasing times in `(0, T]`.
    pub jumps: Vec<(T, JumpSize<T>)>,
    pub compensator_rate: SpectralVector<T>,
}

impl<T: Real> JumpPath<T> {
    pub fn times(&self) -> Vec<T> {
        self.jumps.iter().map(|(t, _)| *t).collect()
    }

    /// `L(t) = sum_{s_i <= t} v_i + t * compensator_rate`.
    pub fn value_at(&self, t: T) -> SpectralVector<T> {
        let mut c: Vec<T> = self.compensator_rate.coeffs().iter().map(|&r| r * t).collect();
        for (s, j) in &self.jumps {
            if *s <= t {
                j.add_scaled(&mut c, |_| T::one());
            }
        }
        SpectralVector::new(c).expect("finite path")
    }
}

impl<T: Real> LevyModel<T> {
    pub fn diagonal_poisson(k: T) -> Result<Self> {
        if !(k > T::zero()) || !k.is_finite() {
            return Err(invalid(format!("diagonal Poisson exponent k must be positive, got {k}")));
        }
        Ok(Self::with_measure(LevyMeasure::DiagonalPoisson { k }))
    }

    pub fn finite_atomic(atoms: Vec<(SpectralVector<T>, T)>) -> Result<Self> {
        if let Some((_, q)) = atoms.iter().find(|(_, q)| !(*q > T::zero()) || !q.is_finite()) {
            return Err(invalid(format!("atom intensities must be positive, got {q}")));
        }
        Ok(Self::with_measure(LevyMeasure::FiniteAtomic { atoms }))
    }

    pub fn alpha_stable(alpha: T, beta: T) -> Result<Self> {
        check_alpha(alpha)?;
        if !(beta >= T::zero()) || !beta.is_finite() {
            return Err(invalid(format!("stable decay beta must be >= 0, got {beta}")));
        }
        Ok(Self::with_measure(LevyMeasure::DiagonalAlphaStable {
            alpha,
            beta,
            amplitude: T::one(),
        }))
    }

    fn with_measure(measure: LevyMeasure<T>) -> Self {
        Self {
            measure,
            drift: None,
            big_jump_threshold: T::one(),
        }
    }

    pub fn with_drift(mut self, m: SpectralVector<T>) -> Self {
        self.drift = Some(m);
        self
    }

    pub fn with_threshold(mut self, threshold: T) -> Result<Self> {
        if !(threshold > T::zero()) {
            return Err(invalid("big-jump threshold must be positive"));
        }
        self.big_jump_threshold = threshold;
        Ok(self)
    }

    pub fn is_finite_activity(&self) -> bool {
        !matches!(self.measure, LevyMeasure::DiagonalAlphaStable { .. })
    }

    /// Atoms `(jump, intensity, substream label)` on the truncation of `op`.
    /// Labels depend only on the mode's multi-index so that paths at
    /// different truncations share the jumps of common modes.
    pub fn atoms(&self, op: &SpectralOperator<T>) -> Result<Vec<(JumpSize<T>, T, u64)>> {
        match &self.measure {
            LevyMeasure::DiagonalPoisson { k } => Ok((0..op.len())
                .map(|i| {
                    let n = T::from_usize(op.rank(i)).unwrap();
                    let label = op.multi_index(i).iter().fold(0u64, |acc, &m| (acc << 20) | m as u64);
                    (JumpSize::Mode { index: i, magnitude: n.powf(-*k) }, T::one(), label)
                })
                .collect()),
            LevyMeasure::FiniteAtomic { atoms } => atoms
                .iter()
                .enumerate()
                .map(|(a, (v, q))| {
                    check_len(op.len(), v.len())?;
                    Ok((JumpSize::Vector(v.clone()), *q, a as u64))
                })
                .collect(),
            LevyMeasure::DiagonalAlphaStable { .. } => Err(crate::Error::Unsupported(
                "alpha-stable noise has infinitely many jumps; use the per-step stable update".into(),
            )),
        }
    }

    /// Total jump intensity on the truncation (finite-activity models).
    pub fn total_intensity(&self, op: &SpectralOperator<T>) -> Result<T> {
        Ok(self.atoms(op)?.iter().map(|(_, q, _)| *q).sum())
    }

    /// `m - sum_{|v|_H <= threshold} intensity * v`.
    pub fn compensator_rate(&self, op: &SpectralOperator<T>) -> Result<SpectralVector<T>> {
        let mut c = match &self.drift {
            Some(m) => {
                check_len(op.len(), m.len())?;
                m.coeffs().to_vec()
            }
            None => vec![T::zero(); op.len()],
        };
        for (jump, q, _) in self.atoms(op)? {
            if jump.h_norm() <= self.big_jump_threshold {
                jump.add_scaled(&mut c, |_| -q);
            }
        }
        SpectralVector::new(c)
    }

    /// Per-mode scale `sigma_n` of the alpha-stable model.
    pub fn stable_sigmas(&self, op: &SpectralOperator<T>) -> Result<(T, Vec<T>)> {
        match &self.measure {
            LevyMeasure::DiagonalAlphaStable { alpha, beta, amplitude } => Ok((
                *alpha,
                (0..op.len())
                    .map(|i| *amplitude * T::from_usize(op.rank(i)).unwrap().powf(-*beta))
                    .collect(),
            )),
            _ => Err(invalid("not an alpha-stable model")),
        }
    }
}

/// Samples a finite-activity jump path on `(0, T]`: per atom a Poisson count
/// and uniform times, merged in time order. Jumps at identical times are
/// combined into one vector jump.
pub fn sample_jump_path<T: Real>(
    model: &LevyModel<T>,
    op: &SpectralOperator<T>,
    horizon: T,
    stream: RngStream,
) -> Result<JumpPath<T>> {
    if !(horizon > T::zero()) || !horizon.is_finite() {
        return Err(invalid(format!("horizon must be positive, got {horizon}")));
    }
    let atoms = model.atoms(op)?;
    let compensator_rate = model.compensator_rate(op)?;
    let mut jumps: Vec<(T, JumpSize<T>)> = Vec::new();
    for (jump, q, label) in atoms {
        let mut rng = stream.substream(label).rng();
        let count = poisson_count(to_f64(q * horizon), &mut rng);
        for _ in 0..count {
            let u: f64 = rng.random();
            // 1 - U lies in (0, 1], so times lie in (0, T].
            jumps.push((horizon * lit(1.0 - u), jump.clone()));
        }
    }
    jumps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut merged: Vec<(T, JumpSize<T>)> = Vec::with_capacity(jumps.len());
    for (t, j) in jumps {
        match merged.last_mut() {
            Some((s, prev)) if *s == t => {
                let mut v = prev.to_vector(op.len());
                j.add_scaled(v.coeffs_mut(), |_| T::one());
                *prev = JumpSize::Vector(v);
            }
            _ => merged.push((t, j)),
        }
    }
    Ok(JumpPath {
        horizon,
        jumps: merged,
        compensator_rate,
    })
}

fn poisson_count(mean: f64, rng: &mut impl Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("positive finite Poisson mean");
    d.sample(rng) as u64
}

/// Per-mode variance of the exact Ornstein-Uhlenbeck update over a step `h`:
/// `lambda^{2 delta_R} (1 - e^{-2 lambda h}) / (2 lambda)`.
pub fn wiener_increment_variances<T: Real>(op: &SpectralOperator<T>, h: T) -> Result<SpectralVector<T>> {
    if !(h > T::zero()) {
        return Err(invalid(format!("step must be positive, got {h}")));
    }
    let two = lit::<T>(2.0);
    let c = op
        .eigenvalues()
        .iter()
        .map(|&l| {
            let color = l.powf(two * op.color_exponent());
            color * -(-two * l * h).exp_m1() / (two * l)
        })
        .collect();
    SpectralVector::new(c)
}

/// Scale of `int_0^h e^{-lambda (h-s)} sigma dl(s)` for a standard symmetric
/// alpha-stable `l`: `sigma ((1 - e^{-alpha lambda h}) / (alpha lambda))^{1/alpha}`.
pub fn stable_ou_step_scale<T: Real>(alpha: T, sigma: T, lambda: T, h: T) -> Result<T> {
    check_alpha(alpha)?;
    if !(h > T::zero()) {
        return Err(invalid(format!("step must be positive, got {h}")));
    }
    let al = alpha * lambda;
    let integral = if al == T::zero() { h } else { -(-al * h).exp_m1() / al };
    Ok(sigma * integral.powf(alpha.recip()))
}

/// Symmetric alpha-stable sample with characteristic function
/// `exp(-|scale u|^alpha)`, by the uniform-angle/exponential construction.
pub fn sample_symmetric_stable<T: Real>(alpha: T, scale: T, rng: &mut impl Rng) -> Result<T> {
    check_alpha(alpha)?;
    if !(scale > T::zero()) {
        return Err(invalid(format!("stable scale must be positive, got {scale}")));
    }
    Ok(scale * lit(standard_stable(to_f64(alpha), rng)))
}

pub(crate) fn standard_stable(alpha: f64, rng: &mut impl Rng) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let v = (rng.random::<f64>() - 0.5) * std::f64::consts::PI;
    if (alpha - 1.0).abs() < 1e-12 {
        return v.tan();
    }
    let w: f64 = Exp1.sample(rng);
    debug_assert!(v.abs() < half_pi);
    (alpha * v).sin() / v.cos().powf(1.0 / alpha) * ((v * (1.0 - alpha)).cos() / w).powf((1.0 - alpha) / alpha)
}

pub(crate) fn standard_normal(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub(crate) fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < lit(2.0) {
        Ok(())
    } else {
        Err(invalid(format!("stability index must lie in (0, 2), got {alpha}")))
    }
}
