use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_axis, Axis, Backend, Coefficient};
use crate::error::{Error, Result};
use crate::{MAX_AXES, MAX_DIM};

/// Integer frequency vector over the interleaved real axes; unused tail entries are zero.
pub type Freq = [i16; MAX_AXES];

pub const DEFAULT_BANDWIDTH_CAP: u32 = 64;

/// Cap carried by fields that impose no budget of their own (constants).
const UNCAPPED: u32 = u32::MAX;

/// Sums whose magnitude falls below this fraction of the summands' magnitudes
/// are treated as exact cancellation.
const CANCEL_REL: f64 = 1e-14;

/// A bandlimited function `Σ a_k exp(2πi k·x)` on the unit torus `[0,1)^{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    n: usize,
    bandwidth: [u32; MAX_AXES],
    cap: u32,
    real: bool,
    modes: BTreeMap<Freq, Complex64>,
}

fn zero_freq() -> Freq {
    [0; MAX_AXES]
}

fn neg_freq(k: &Freq) -> Freq {
    let mut out = *k;
    for v in out.iter_mut() {
        *v = -*v;
    }
    out
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

impl FourierField {
    pub fn new_zero(n: usize) -> Self {
        FourierField {
            n,
            bandwidth: [0; MAX_AXES],
            cap: UNCAPPED,
            real: true,
            modes: BTreeMap::new(),
        }
    }

    /// Builds a field from `(frequency, amplitude)` pairs; repeated frequencies accumulate.
    /// Frequencies have length `2n`. The result is not flagged real.
    pub fn from_modes<I>(n: usize, modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, Complex64)>,
    {
        check_dim(n)?;
        let mut field = FourierField::new_zero(n);
        field.cap = DEFAULT_BANDWIDTH_CAP;
        field.real = false;
        for (k, amp) in modes {
            if k.len() != 2 * n {
                return Err(Error::InvalidArgument(format!(
                    "frequency vector of length {} in dimension {n}",
                    k.len()
                )));
            }
            let mut freq = zero_freq();
            for (axis, &v) in k.iter().enumerate() {
                let v16 = i16::try_from(v)
                    .map_err(|_| Error::InvalidArgument(format!("frequency {v} out of range")))?;
                freq[axis] = v16;
                let b = v.unsigned_abs();
                if b > field.cap {
                    return Err(Error::BandwidthOverflow {
                        axis,
                        requested: b,
                        cap: field.cap,
                    });
                }
                field.bandwidth[axis] = field.bandwidth[axis].max(b);
            }
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            *field.modes.entry(freq).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        field.modes.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        Ok(field)
    }

    /// Like [`from_modes`](Self::from_modes) but requires `a_{-k} = conj(a_k)`
    /// and sets the reality flag.
    pub fn real_from_modes<I>(n: usize, modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, Complex64)>,
    {
        let mut field = Self::from_modes(n, modes)?;
        for (k, a) in &field.modes {
            let b = field.modes.get(&neg_freq(k)).copied().unwrap_or_default();
            if (b.conj() - a).norm() > 1e-15 * a.norm().max(1.0) {
                return Err(Error::NotReal("Fourier mode table (a_-k != conj a_k)"));
            }
        }
        field.real = true;
        Ok(field)
    }

    /// `amplitude · cos(2π k·x)`.
    pub fn cosine(n: usize, k: &[i32], amplitude: f64) -> Result<Self> {
        let neg: Vec<i32> = k.iter().map(|v| -v).collect();
        let half = Complex64::new(amplitude / 2.0, 0.0);
        Self::real_from_modes(n, [(k.to_vec(), half), (neg, half)])
    }

    /// `amplitude · sin(2π k·x)`.
    pub fn sine(n: usize, k: &[i32], amplitude: f64) -> Result<Self> {
        let neg: Vec<i32> = k.iter().map(|v| -v).collect();
        let a = Complex64::new(0.0, -amplitude / 2.0);
        Self::real_from_modes(n, [(k.to_vec(), a), (neg, a.conj())])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Declared per-axis bandwidth (length `2n`).
    pub fn bandwidth(&self) -> &[u32] {
        &self.bandwidth[..2 * self.n]
    }

    pub fn max_bandwidth(&self) -> u32 {
        self.bandwidth().iter().copied().max().unwrap_or(0)
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Freq, &Complex64)> {
        self.modes.iter()
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn amplitude(&self, k: &[i32]) -> Complex64 {
        let mut freq = zero_freq();
        for (axis, &v) in k.iter().enumerate().take(MAX_AXES) {
            freq[axis] = v as i16;
        }
        self.modes.get(&freq).copied().unwrap_or_default()
    }

    /// Returns the field with a new bandwidth cap, failing if it already exceeds it.
    pub fn with_cap(mut self, cap: u32) -> Result<Self> {
        for (axis, &b) in self.bandwidth().iter().enumerate() {
            if b > cap {
                return Err(Error::BandwidthOverflow {
                    axis,
                    requested: b,
                    cap,
                });
            }
        }
        self.cap = cap;
        Ok(self)
    }

    /// Overrides the declared bandwidth; it must cover every stored mode.
    pub fn with_declared_bandwidth(mut self, bandwidth: &[u32]) -> Result<Self> {
        if bandwidth.len() != 2 * self.n {
            return Err(Error::InvalidArgument(
                "bandwidth vector must have length 2n".into(),
            ));
        }
        for k in self.modes.keys() {
            for (axis, &b) in bandwidth.iter().enumerate() {
                if k[axis].unsigned_abs() as u32 > b {
                    return Err(Error::InvalidArgument(format!(
                        "declared bandwidth {b} on axis {axis} below stored frequency {}",
                        k[axis]
                    )));
                }
            }
        }
        self.bandwidth[..2 * self.n].copy_from_slice(bandwidth);
        Ok(self)
    }

    /// Embeds the field into a torus of dimension `n_total`, occupying
    /// complex axes `offset+1 ..= offset+n`.
    pub fn embed(&self, n_total: usize, offset: usize) -> Result<Self> {
        check_dim(n_total)?;
        if offset + self.n > n_total {
            return Err(Error::DimensionMismatch(offset + self.n, n_total));
        }
        let shift = 2 * offset;
        let mut bandwidth = [0; MAX_AXES];
        bandwidth[shift..shift + 2 * self.n].copy_from_slice(self.bandwidth());
        let modes = self
            .modes
            .iter()
            .map(|(k, a)| {
                let mut freq = zero_freq();
                freq[shift..shift + 2 * self.n].copy_from_slice(&k[..2 * self.n]);
                (freq, *a)
            })
            .collect();
        Ok(FourierField {
            n: n_total,
            bandwidth,
            cap: self.cap,
            real: self.real,
            modes,
        })
    }

    /// Translation `x ↦ f(x + shift)`.
    pub fn translate(&self, shift: &[f64]) -> Self {
        let mut out = self.clone();
        for (k, a) in out.modes.iter_mut() {
            let phase: f64 = (0..2 * self.n).map(|ax| k[ax] as f64 * shift[ax]).sum();
            *a *= Complex64::from_polar(1.0, 2.0 * PI * phase);
        }
        out
    }

    /// Sup-norm bound on the real gradient `Σ |a_k| 2π|k|`.
    pub fn gradient_bound(&self) -> f64 {
        self.modes
            .iter()
            .map(|(k, a)| {
                let k2: f64 = k.iter().map(|&v| (v as f64).powi(2)).sum();
                a.norm() * 2.0 * PI * k2.sqrt()
            })
            .sum()
    }

    fn combine_meta(&self, other: &Self) -> Result<(u32, bool)> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok((self.cap.min(other.cap), self.real && other.real))
    }

    fn wirtinger_factor(k: &Freq, axis: Axis) -> Complex64 {
        // d/dx_j e(k·x) = 2πi k_x, d/dy_j = 2πi k_y; ∂_z = ½(∂_x − i∂_y), ∂_z̄ = ½(∂_x + i∂_y)
        let j = axis.index() - 1;
        let kx = k[2 * j] as f64;
        let ky = k[2 * j + 1] as f64;
        match axis {
            Axis::Z(_) => Complex64::new(PI * ky, PI * kx),
            Axis::ZBar(_) => Complex64::new(-PI * ky, PI * kx),
        }
    }
}

impl Coefficient for FourierField {
    const BACKEND: Backend = Backend::Fourier;
    const PRUNE_REL: f64 = 1e-14;

    fn constant(n: usize, value: Complex64) -> Self {
        let mut f = FourierField::new_zero(n);
        f.real = value.im == 0.0;
        if value != Complex64::new(0.0, 0.0) {
            f.modes.insert(zero_freq(), value);
        }
        f
    }

    fn dim(&self) -> Option<usize> {
        Some(self.n)
    }

    fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    fn magnitude(&self) -> f64 {
        self.modes.values().map(|a| a.norm()).sum()
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        let (cap, real) = self.combine_meta(other)?;
        let mut modes = self.modes.clone();
        for (k, b) in &other.modes {
            match modes.entry(*k) {
                Entry::Occupied(mut e) => {
                    let a = *e.get();
                    let s = a + b;
                    if s.norm() <= CANCEL_REL * (a.norm() + b.norm()) {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
                Entry::Vacant(e) => {
                    e.insert(*b);
                }
            }
        }
        let mut bandwidth = self.bandwidth;
        for (b, o) in bandwidth.iter_mut().zip(other.bandwidth.iter()) {
            *b = (*b).max(*o);
        }
        Ok(FourierField {
            n: self.n,
            bandwidth,
            cap,
            real,
            modes,
        })
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        let (cap, real) = self.combine_meta(other)?;
        let mut bandwidth = [0; MAX_AXES];
        for axis in 0..2 * self.n {
            let b = self.bandwidth[axis] + other.bandwidth[axis];
            if b > cap {
                return Err(Error::BandwidthOverflow {
                    axis,
                    requested: b,
                    cap,
                });
            }
            bandwidth[axis] = b;
        }
        let mut acc: BTreeMap<Freq, (Complex64, f64)> = BTreeMap::new();
        for (k1, a1) in &self.modes {
            for (k2, a2) in &other.modes {
                let mut k = *k1;
                for axis in 0..2 * self.n {
                    k[axis] += k2[axis];
                }
                let p = a1 * a2;
                let slot = acc.entry(k).or_insert((Complex64::new(0.0, 0.0), 0.0));
                slot.0 += p;
                slot.1 += p.norm();
            }
        }
        let modes = acc
            .into_iter()
            .filter(|(_, (s, scale))| s.norm() > CANCEL_REL * scale)
            .map(|(k, (s, _))| (k, s))
            .collect();
        Ok(FourierField {
            n: self.n,
            bandwidth,
            cap,
            real,
            modes,
        })
    }

    fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            let mut z = FourierField::new_zero(self.n);
            z.cap = self.cap;
            z.bandwidth = self.bandwidth;
            return z;
        }
        let mut out = self.clone();
        for a in out.modes.values_mut() {
            *a *= c;
        }
        out.real = self.real && c.im == 0.0;
        out
    }

    fn conj(&self) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|(k, a)| (neg_freq(k), a.conj()))
            .collect();
        FourierField {
            modes,
            ..self.clone()
        }
    }

    fn deriv(&self, axis: Axis) -> Result<Self> {
        check_axis(axis, self.n)?;
        let modes: BTreeMap<_, _> = self
            .modes
            .iter()
            .filter_map(|(k, a)| {
                let f = Self::wirtinger_factor(k, axis);
                (f != Complex64::new(0.0, 0.0)).then(|| (*k, a * f))
            })
            .collect();
        let real = modes.is_empty();
        Ok(FourierField {
            modes,
            real,
            ..self.clone()
        })
    }

    fn mean(&self) -> Result<Complex64> {
        Ok(self.modes.get(&zero_freq()).copied().unwrap_or_default())
    }

    fn eval(&self, point: &[f64]) -> Complex64 {
        self.modes
            .iter()
            .map(|(k, a)| {
                let phase: f64 = (0..2 * self.n).map(|ax| k[ax] as f64 * point[ax]).sum();
                a * Complex64::from_polar(1.0, 2.0 * PI * phase)
            })
            .sum()
    }

    fn is_real(&self) -> bool {
        self.real
    }

    fn real_part(&self) -> Self {
        let mut acc: BTreeMap<Freq, Complex64> = BTreeMap::new();
        for (k, a) in &self.modes {
            *acc.entry(*k).or_default() += a * 0.5;
            *acc.entry(neg_freq(k)).or_default() += a.conj() * 0.5;
        }
        let scale = self.magnitude();
        acc.retain(|_, a| a.norm() > CANCEL_REL * scale);
        // zero mode must be exactly real
        if let Some(a0) = acc.get_mut(&zero_freq()) {
            a0.im = 0.0;
        }
        FourierField {
            modes: acc,
            real: true,
            ..self.clone()
        }
    }

    fn distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (k, a) in &self.modes {
            let b = other.modes.get(k).copied().unwrap_or_default();
            d = d.max((a - b).norm());
        }
        for (k, b) in &other.modes {
            if !self.modes.contains_key(k) {
                d = d.max(b.norm());
            }
        }
        d
    }

    fn embed(&self, n_total: usize, offset: usize) -> Result<Self> {
        FourierField::embed(self, n_total, offset)
    }

    fn as_fourier(&self) -> Option<&FourierField> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn opposite_modes_multiply_to_one() {
        let f = FourierField::from_modes(2, [(vec![1, 0, 0, 0], c(1.0, 0.0))]).unwrap();
        let g = FourierField::from_modes(2, [(vec![-1, 0, 0, 0], c(1.0, 0.0))]).unwrap();
        let p = f.try_mul(&g).unwrap();
        assert_eq!(p.num_modes(), 1);
        assert_eq!(p.mean().unwrap(), c(1.0, 0.0));
        assert_eq!(p.bandwidth()[0], 2);
    }

    #[test]
    fn holomorphic_derivative_of_x1_mode() {
        let f = FourierField::from_modes(1, [(vec![1, 0], c(1.0, 0.0))]).unwrap();
        let d = f.deriv(Axis::Z(1)).unwrap();
        let a = d.amplitude(&[1, 0]);
        assert!((a - c(0.0, PI)).norm() < 1e-15);
    }

    #[test]
    fn mean_of_shifted_cosine() {
        let f = FourierField::cosine(1, &[1, 0], 0.3)
            .unwrap()
            .try_add(&FourierField::constant(1, c(1.0, 0.0)))
            .unwrap();
        assert_eq!(f.mean().unwrap(), c(1.0, 0.0));
        let e = FourierField::from_modes(1, [(vec![1, 0], c(1.0, 0.0))]).unwrap();
        assert_eq!(e.mean().unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn cap_overflow_is_reported() {
        let f = FourierField::cosine(1, &[3, 0], 1.0)
            .unwrap()
            .with_cap(4)
            .unwrap();
        let err = f.try_mul(&f).unwrap_err();
        assert!(matches!(
            err,
            Error::BandwidthOverflow {
                axis: 0,
                requested: 6,
                cap: 4
            }
        ));
    }

    #[test]
    fn asymmetric_modes_rejected_as_real() {
        let r = FourierField::real_from_modes(1, [(vec![1, 0], c(1.0, 0.0))]);
        assert!(matches!(r, Err(Error::NotReal(_))));
    }

    #[test]
    fn deriv_axis_range_checked() {
        let f = FourierField::cosine(1, &[1, 0], 1.0).unwrap();
        assert!(f.deriv(Axis::Z(2)).is_err());
        assert!(f.deriv(Axis::ZBar(0)).is_err());
    }

    #[test]
    fn cosine_evaluates() {
        let f = FourierField::cosine(1, &[1, 0], 0.5).unwrap();
        assert!((f.eval(&[0.0, 0.3]) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((f.eval(&[0.5, 0.0]) - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn embed_places_axes() {
        let f = FourierField::cosine(1, &[1, 2], 1.0).unwrap();
        let g = f.embed(3, 1).unwrap();
        assert_eq!(g.amplitude(&[0, 0, 1, 2, 0, 0]), c(0.5, 0.0));
        assert_eq!(g.bandwidth(), &[0, 0, 1, 2, 0, 0]);
    }
}
