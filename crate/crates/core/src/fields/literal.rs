//! Text literals for fields, as they appear in scenario configs.
//!
//! Fourier fields are lists of `(frequency-vector, [re, im])` pairs and
//! polynomial fields are lists of `(exponents, [re, im])` pairs where the
//! exponent vector lists `z_1..z_n` then `z̄_1..z̄_n`. Amplitudes are `f64`
//! and serialize with shortest round-trip formatting, so
//! `field -> literal -> field` is the identity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Coefficient, FourierField, PolyField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierLiteral {
    pub n: usize,
    #[serde(default)]
    pub real: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<Vec<u32>>,
    pub modes: Vec<(Vec<i32>, [f64; 2])>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyLiteral {
    pub n: usize,
    pub terms: Vec<(Vec<u16>, [f64; 2])>,
}

impl FourierLiteral {
    pub fn to_field(&self) -> Result<FourierField> {
        let modes = self
            .modes
            .iter()
            .map(|(k, a)| (k.clone(), Complex64::new(a[0], a[1])));
        let mut field = if self.real {
            FourierField::real_from_modes(self.n, modes)?
        } else {
            FourierField::from_modes(self.n, modes)?
        };
        if let Some(bw) = &self.bandwidth {
            if bw.len() != 2 * self.n {
                return Err(Error::InvalidArgument(
                    "bandwidth vector must have length 2n".into(),
                ));
            }
            field = field.with_declared_bandwidth(bw)?;
        }
        if let Some(cap) = self.cap {
            field = field.with_cap(cap)?;
        }
        Ok(field)
    }

    pub fn from_field(field: &FourierField) -> Self {
        let n = field.n();
        let modes = field
            .modes()
            .map(|(k, a)| (k[..2 * n].iter().map(|&v| v as i32).collect(), [a.re, a.im]))
            .collect();
        FourierLiteral {
            n,
            real: field.is_real(),
            cap: (field.cap() != u32::MAX).then_some(field.cap()),
            bandwidth: Some(field.bandwidth().to_vec()),
            modes,
        }
    }
}

impl PolyLiteral {
    pub fn to_field(&self) -> Result<PolyField> {
        PolyField::from_terms(
            self.n,
            self.terms
                .iter()
                .map(|(e, a)| (e.clone(), Complex64::new(a[0], a[1]))),
        )
    }

    pub fn from_field(field: &PolyField) -> Self {
        let n = field.n();
        let terms = field
            .terms()
            .map(|(m, c)| {
                let mut e: Vec<u16> = m[..n].to_vec();
                e.extend_from_slice(&m[crate::MAX_DIM..crate::MAX_DIM + n]);
                (e, [c.re, c.im])
            })
            .collect();
        PolyLiteral { n, terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_real_fourier;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #[test]
        fn fourier_literal_round_trips_through_json(seed in 0u64..1000, n in 1usize..=3, band in 1u32..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_real_fourier(&mut rng, n, band, 5, 1.0);
            let lit = FourierLiteral::from_field(&f);
            let text = serde_json::to_string(&lit).unwrap();
            let back: FourierLiteral = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.to_field().unwrap(), f);
        }

        #[test]
        fn poly_literal_round_trips_through_toml(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = crate::random::random_poly(&mut rng, 3, 3, 6);
            let lit = PolyLiteral::from_field(&p);
            #[derive(Serialize, Deserialize)]
            struct Wrap { field: PolyLiteral }
            let text = toml::to_string(&Wrap { field: lit }).unwrap();
            let back: Wrap = toml::from_str(&text).unwrap();
            prop_assert_eq!(back.field.to_field().unwrap(), p);
        }
    }

    #[test]
    fn unknown_literal_key_rejected() {
        let r: std::result::Result<FourierLiteral, _> =
            serde_json::from_str(r#"{"n":1,"modes":[],"bogus":1}"#);
        assert!(r.is_err());
    }
}
