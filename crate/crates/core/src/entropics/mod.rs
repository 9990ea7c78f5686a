//! Divergences between states and the relaxed key, repeater and randomness
//! rate bounds built from them. All values are in bits.

mod bounds;
mod divergences;
mod rates;

pub use bounds::{
    key_bound_relaxed, mutual_info_key_bound, repeater_bound, AlphaGrid, BoundComponents,
    BoundReport, EdProxy, SepProxy, SepProxyKind,
};
pub use divergences::{
    dmax, emax_mixed_proxy, hypothesis_testing, log_negativity, relative_entropy,
    sandwiched_renyi, RenyiContext,
};
pub use rates::{rate_region, rate_region_from_entropies, RateRegion};

use serde::{Deserialize, Serialize};

/// A divergence in bits, possibly `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceValue {
    #[serde(with = "extended")]
    pub value: f64,
    #[serde(with = "extended_opt")]
    pub alpha: Option<f64>,
    pub support_ok: bool,
}

impl DivergenceValue {
    pub fn finite(value: f64, alpha: Option<f64>) -> Self {
        Self { value, alpha, support_ok: true }
    }

    pub fn infinite(alpha: Option<f64>) -> Self {
        Self { value: f64::INFINITY, alpha, support_ok: false }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Ext {
    Num(f64),
    Text(String),
}

fn to_ext(v: f64) -> Ext {
    if v == f64::INFINITY {
        Ext::Text("inf".into())
    } else if v == f64::NEG_INFINITY {
        Ext::Text("-inf".into())
    } else {
        Ext::Num(v)
    }
}

fn from_ext<E: serde::de::Error>(e: Ext) -> Result<f64, E> {
    match e {
        Ext::Num(v) => Ok(v),
        Ext::Text(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(E::custom(format!("expected a number or \"inf\", got {other:?}"))),
        },
    }
}

/// Serializes `+∞` as the string `"inf"` and finite values as numbers.
pub mod extended {
    use super::*;

    pub fn serialize<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_ext(*v).serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_ext(Ext::deserialize(d)?)
    }
}

/// [`extended`] for optional values.
pub mod extended_opt {
    use super::*;

    pub fn serialize<S: serde::Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(to_ext).serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<Ext>::deserialize(d)?.map(from_ext).transpose()
    }
}

/// [`extended`] for lists.
pub mod extended_vec {
    use super::*;

    pub fn serialize<S: serde::Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| to_ext(*x)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Ext>::deserialize(d)?.into_iter().map(from_ext).collect()
    }
}
