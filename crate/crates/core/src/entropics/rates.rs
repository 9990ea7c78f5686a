use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::states::{IbitEntropies, IndependentBit};
use crate::{Error, Result};

/// Private randomness rates of an ibit with `A ↦ AA'` and `B ↦ B'`.
///
/// Scenarios: 1 no communication and no noise, 2 free noise, 3 free noise
/// and communication, 4 free communication without noise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    pub scenario: u8,
    #[serde(rename = "R_A")]
    pub r_a: f64,
    #[serde(rename = "R_B")]
    pub r_b: f64,
    #[serde(rename = "R_G")]
    pub r_g: f64,
    pub condition_flags: BTreeMap<String, bool>,
}

pub fn rate_region(alpha_state: &IndependentBit, scenario: u8) -> Result<RateRegion> {
    rate_region_from_entropies(alpha_state.d_s(), &alpha_state.entropies()?, scenario)
}

/// [`rate_region`] from precomputed entropies, so all four scenarios share
/// one set of eigendecompositions.
pub fn rate_region_from_entropies(d_s: usize, e: &IbitEntropies, scenario: u8) -> Result<RateRegion> {
    let ds = d_s as f64;
    let log_a = (2.0 * ds).log2();
    let log_b = ds.log2();
    let log_ab = (2.0 * ds * ds).log2();
    let r_g = log_ab - e.s_aab;
    let cond_a = e.s_aab - e.s_b;
    let cond_b = e.s_aab - e.s_aa;
    let half_ln2 = 1.0 / (2.0 * std::f64::consts::LN_2);

    let mut flags = BTreeMap::new();
    flags.insert("S(AA'|B')>=0".to_string(), cond_a >= 0.0);
    flags.insert("S(B'|AA')>=0".to_string(), cond_b >= 0.0);
    flags.insert("S(B')<=S(AA'B')".to_string(), e.s_b <= e.s_aab);
    flags.insert("S(AA')<=S(AA'B')".to_string(), e.s_aa <= e.s_aab);
    flags.insert("log2(d_s)>=1/(2ln2)".to_string(), log_b >= half_ln2);
    flags.insert("log2(d_s)>=1+1/(2ln2)".to_string(), log_b >= 1.0 + half_ln2);

    let (r_a, r_b) = match scenario {
        1 => (log_a - cond_a.max(0.0), log_b - cond_b.max(0.0)),
        2 => (log_a - cond_a, log_b - cond_b),
        3 => (r_g, r_g),
        4 => (log_ab - e.s_b.max(e.s_aab), log_ab - e.s_aa.max(e.s_aab)),
        other => return Err(Error::invalid(format!("scenario must be 1..=4, got {other}"))),
    };
    Ok(RateRegion { scenario, r_a, r_b, r_g, condition_flags: flags })
}
