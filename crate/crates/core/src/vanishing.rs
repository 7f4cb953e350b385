//! Nearby and vanishing cycles from combinatorial resolution data, and
//! Milnor-fibre classes of `x^a + y^b` through the Thom–Sebastiani rule.
//!
//! Resolution files are line oriented:
//!
//! ```text
//! divisor <label> mult <n>
//! stratum {<label>,...} [over <region>] class <motive-expr>
//! central <motive-expr>
//! ```
//!
//! `#` starts a comment. A label set may be listed several times; the classes add.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::motive::{mu_n_class, parse_motive, Motive, ParseError};

pub const X_N_RES: &str = include_str!("../data/x_n.res");
pub const X4Y4_RES: &str = include_str!("../data/x4y4.res");
pub const X4Y2_RES: &str = include_str!("../data/x4y2.res");
pub const X2Y2_RES: &str = include_str!("../data/x2y2.res");
pub const TRT4_SUT_RES: &str = include_str!("../data/trT4_sut.res");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: bad class: {source}")]
    Class { line: usize, source: ParseError },
    #[error("duplicate divisor label {0}")]
    DuplicateLabel(String),
    #[error("stratum references undeclared divisor {0}")]
    UnknownLabel(String),
    #[error("divisor {0} has multiplicity zero")]
    ZeroMultiplicity(String),
    #[error("stratum {{{labels}}} carries a character of order {order} not dividing the multiplicity gcd {gcd}")]
    CoverOrder { labels: String, order: u64, gcd: u64 },
    #[error("central fibre class must be trivial-sector and polynomial")]
    CentralNotTrivial,
    #[error("missing central fibre class")]
    MissingCentral,
}

/// One stratum `D̃_I ∩ h⁻¹(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub labels: BTreeSet<String>,
    /// Part of the base the stratum lies over, when the data is relative.
    pub region: Option<String>,
    pub class: Motive,
}

/// Divisor multiplicities, cover classes of strata, and the central fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    pub divisors: Vec<(String, u32)>,
    pub strata: Vec<Stratum>,
    pub central: Motive,
}

impl ResolutionData {
    /// Checks labels, multiplicities and cover orders.
    pub fn validate(&self) -> Result<(), ResolutionError> {
        let mut mult: BTreeMap<&str, u32> = BTreeMap::new();
        for (l, m) in &self.divisors {
            if *m == 0 {
                return Err(ResolutionError::ZeroMultiplicity(l.clone()));
            }
            if mult.insert(l, *m).is_some() {
                return Err(ResolutionError::DuplicateLabel(l.clone()));
            }
        }
        for st in &self.strata {
            let mut g = 0u64;
            for l in &st.labels {
                let m = mult.get(l.as_str()).ok_or_else(|| ResolutionError::UnknownLabel(l.clone()))?;
                g = num_integer::gcd(g, *m as u64);
            }
            for (c, _) in st.class.numerator().iter() {
                if !g.is_multiple_of(c.denom()) {
                    return Err(ResolutionError::CoverOrder {
                        labels: st.labels.iter().cloned().collect::<Vec<_>>().join(","),
                        order: c.denom(),
                        gcd: g,
                    });
                }
            }
        }
        if !self.central.is_trivial_sector() || !self.central.is_polynomial() {
            return Err(ResolutionError::CentralNotTrivial);
        }
        Ok(())
    }

    /// Parses and validates the text format.
    pub fn parse(text: &str) -> Result<ResolutionData, ResolutionError> {
        let mut divisors = Vec::new();
        let mut strata = Vec::new();
        let mut central = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let syntax = |msg: &str| ResolutionError::Syntax { line, msg: msg.to_string() };
            let class = |src: &str| parse_motive(src).map_err(|source| ResolutionError::Class { line, source });
            if let Some(rest) = body.strip_prefix("divisor ") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 || parts[1] != "mult" {
                    return Err(syntax("expected `divisor <label> mult <n>`"));
                }
                let m: u32 = parts[2].parse().map_err(|_| syntax("bad multiplicity"))?;
                divisors.push((parts[0].to_string(), m));
            } else if let Some(rest) = body.strip_prefix("stratum ") {
                let rest = rest.trim_start();
                let rest = rest.strip_prefix('{').ok_or_else(|| syntax("expected `{`"))?;
                let close = rest.find('}').ok_or_else(|| syntax("expected `}`"))?;
                let labels: BTreeSet<String> = rest[..close]
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if labels.is_empty() {
                    return Err(syntax("empty stratum"));
                }
                let mut rest = rest[close + 1..].trim_start();
                let mut region = None;
                if let Some(r) = rest.strip_prefix("over ") {
                    let r = r.trim_start();
                    let end = r.find(char::is_whitespace).ok_or_else(|| syntax("expected region"))?;
                    region = Some(r[..end].to_string());
                    rest = r[end..].trim_start();
                }
                let src = rest.strip_prefix("class ").ok_or_else(|| syntax("expected `class`"))?;
                strata.push(Stratum { labels, region, class: class(src)? });
            } else if let Some(rest) = body.strip_prefix("central ") {
                central = Some(class(rest)?);
            } else {
                return Err(syntax("unknown directive"));
            }
        }
        let data = ResolutionData { divisors, strata, central: central.ok_or(ResolutionError::MissingCentral)? };
        data.validate()?;
        Ok(data)
    }

    /// The strata lying over `region`; the central class is kept.
    pub fn restrict(&self, region: &str) -> ResolutionData {
        ResolutionData {
            divisors: self.divisors.clone(),
            strata: self.strata.iter().filter(|s| s.region.as_deref() == Some(region)).cloned().collect(),
            central: self.central.clone(),
        }
    }

    /// Sum of the classes listed for exactly the label set `labels`.
    pub fn stratum_class(&self, labels: &[&str]) -> Motive {
        let key: BTreeSet<String> = labels.iter().map(|s| s.to_string()).collect();
        self.strata.iter().filter(|s| s.labels == key).fold(Motive::zero(), |acc, s| &acc + &s.class)
    }
}

/// `Σ_I (1 − L)^{|I|−1} [D̃_I]`.
pub fn nearby_cycle(data: &ResolutionData) -> Motive {
    let one_minus_l = &Motive::one() - &Motive::lef();
    let mut total = Motive::zero();
    for st in &data.strata {
        let w = one_minus_l.pow(st.labels.len() as u32 - 1);
        total = &total + &w.mul_naive(&st.class);
    }
    total
}

/// `[ψ_f] − [f⁻¹(0)]`.
pub fn vanishing_cycle(data: &ResolutionData) -> Motive {
    &nearby_cycle(data) - &data.central
}

/// Resolution data of `xⁿ`, expanded from the shipped template.
pub fn x_n_data(n: u32) -> ResolutionData {
    let mu = (0..n).map(|k| format!("chi({k}/{n})")).collect::<Vec<_>>().join(" + ");
    let text = X_N_RES.replace("{n}", &n.to_string()).replace("{mu_n}", &mu);
    ResolutionData::parse(&text).expect("shipped template parses")
}

fn shipped(text: &str) -> ResolutionData {
    ResolutionData::parse(text).expect("shipped resolution data parses")
}

pub fn x4y4_data() -> ResolutionData {
    shipped(X4Y4_RES)
}

pub fn x4y2_data() -> ResolutionData {
    shipped(X4Y2_RES)
}

pub fn x2y2_data() -> ResolutionData {
    shipped(X2Y2_RES)
}

pub fn trt4_data() -> ResolutionData {
    shipped(TRT4_SUT_RES)
}

/// `MF(x^a + y^b)` from `1 − MF(x^a ⊕ y^b) = (1 − [μ_a]) ⋆ (1 − [μ_b])`.
pub fn milnor_fibre_ts(a: u32, b: u32) -> Motive {
    let one = Motive::one();
    let fa = &one - &mu_n_class(a);
    let fb = &one - &mu_n_class(b);
    &one - &fa.mul_exotic(&fb)
}

/// Pieces of the weight of the strictly upper-triangular slice.
#[derive(Clone, Debug)]
pub struct Chapter2Parts {
    /// Nearby-cycle contribution over the punctured slice.
    pub m_nt: Motive,
    /// Nearby-cycle contribution over the zero matrix.
    pub m_t: Motive,
    /// Total cover class of the `{Y}` stratum.
    pub d_y: Motive,
    /// `[−φ] · L⁻¹`.
    pub weight: Motive,
}

/// Assembles the weight `[−φ_{tr T⁴}] · L⁻¹` on the strictly upper-triangular slice.
pub fn chapter2_parts() -> Chapter2Parts {
    let data = trt4_data();
    let m_nt = nearby_cycle(&data.restrict("H"));
    let m_t = nearby_cycle(&data.restrict("0"));
    let d_y = data.restrict("0").stratum_class(&["Y"]);
    let phi = &(&m_nt + &m_t) - &data.central;
    let weight = phi.neg().mul_naive(&Motive::lef_pow(-1));
    Chapter2Parts { m_nt, m_t, d_y, weight }
}

/// The composite Chapter-2 weight.
pub fn chapter2_weight() -> Motive {
    chapter2_parts().weight
}
