use std::fmt;

use super::{AlgError, PowerSeries, QuadExt, Rat, RatFunc, Ring};

/// Truncated Puiseux series `sum_k coeffs[k] t^(valuation + k/r)`, exact for
/// every exponent strictly below `precision`.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxTrunc {
    pub ramification: u32,
    pub valuation: Rat,
    pub coeffs: Vec<Rat>,
    pub precision: Rat,
}

impl PuiseuxTrunc {
    /// Coefficient of `t^e` (zero outside the stored range).
    pub fn coeff_at(&self, e: &Rat) -> Rat {
        let k = (e - &self.valuation) * Rat::from(self.ramification as i64);
        match k.to_i64() {
            Some(k) if k >= 0 => self.coeffs.get(k as usize).cloned().unwrap_or_else(Rat::zero),
            _ => Rat::zero(),
        }
    }

    /// `(exponent, coefficient)` pairs of the nonzero terms.
    pub fn terms(&self) -> Vec<(Rat, Rat)> {
        let r = Rat::from(self.ramification as i64);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (&self.valuation + &(Rat::from(k as i64) / r.clone()), c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for PuiseuxTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*t^({e})")?;
        }
        write!(f, " + O(t^({}))", self.precision)
    }
}

/// Expands `e` as a Puiseux series under the fixed embedding, keeping every
/// exponent `<= order`.
pub fn puiseux_expand(e: &QuadExt, order: &Rat) -> Result<PuiseuxTrunc, AlgError> {
    let last = order.floor();
    let last: i64 = last.try_into().expect("expansion order out of range");
    let Some(rad) = e.radicand() else {
        return Ok(from_laurent(e.base(), last, order));
    };
    let r0 = rad
        .low_root()
        .ok_or_else(|| AlgError::IrrationalLeadingCoefficient(rad.low_coeff().clone()))?
        .clone();
    let k = rad.valuation() as i64;
    // collect integer-exponent and half-exponent parts on the grid (1/2) Z
    let mut terms: Vec<(i64, Rat)> = Vec::new(); // exponent doubled
    if let Some((v, cs)) = e.base().laurent(last) {
        for (i, c) in cs.into_iter().enumerate() {
            terms.push((2 * (v + i as i64), c));
        }
    }
    // sqrt(D) = r0 * t^(k/2) * (D / (r0^2 t^k))^(1/2)
    let b = e.radical_coeff();
    if let Some(vb) = b.valuation_int() {
        // exponents of b*sqrt(D) are vb + k/2 + n; keep those <= order
        let o2: i64 = (order * &Rat::from(2)).floor().try_into().expect("order out of range");
        let top = (o2 - 2 * vb - k).div_euclid(2);
        if top >= 0 {
            let len = top as usize + 1;
            let d = rad.poly();
            let unit: Vec<Rat> = d.coeffs()[rad.valuation()..]
                .iter()
                .map(|c| c / rad.low_coeff())
                .collect();
            let s = PowerSeries::new(unit, len).pow_rat(&Rat::new(1, 2));
            let (_, bl) = b.laurent(vb + top).unwrap();
            let bs = PowerSeries::new(bl, len).mul(&s);
            for (n, c) in bs.coeffs().iter().enumerate() {
                terms.push((2 * (vb + n as i64) + k, c * &r0));
            }
        }
    }
    let ram: u32 = if k == 1 { 2 } else { 1 };
    let order2 = order * &Rat::from(2);
    let mut merged: std::collections::BTreeMap<i64, Rat> = Default::default();
    for (e2, c) in terms {
        if Rat::from(e2) > order2 {
            continue;
        }
        let slot = merged.entry(e2).or_insert_with(Rat::zero);
        *slot = &*slot + &c;
    }
    merged.retain(|_, c| !c.is_zero());
    let step = if ram == 2 { 1 } else { 2 };
    let precision = order + &Rat::new(1, ram as i64);
    let Some((&first, _)) = merged.iter().next() else {
        return Ok(PuiseuxTrunc { ramification: ram, valuation: precision.clone(), coeffs: vec![], precision });
    };
    let lastk = *merged.keys().last().unwrap();
    let coeffs = (first..=lastk)
        .step_by(step)
        .map(|e2| merged.get(&e2).cloned().unwrap_or_else(Rat::zero))
        .collect();
    Ok(PuiseuxTrunc { ramification: ram, valuation: Rat::new(first, 2), coeffs, precision })
}

fn from_laurent(f: &RatFunc, last: i64, order: &Rat) -> PuiseuxTrunc {
    let precision = order + &Rat::one();
    match f.laurent(last) {
        Some((v, mut cs)) if !cs.is_empty() => {
            while cs.last().is_some_and(|c| c.is_zero()) {
                cs.pop();
            }
            PuiseuxTrunc { ramification: 1, valuation: Rat::from(v), coeffs: cs, precision }
        }
        _ => PuiseuxTrunc { ramification: 1, valuation: precision.clone(), coeffs: vec![], precision },
    }
}
