use crate::error::{Error, Result};
use crate::schur::{log2_multiplicity, multiplicity, valid_spins, SpinLabel};

/// How a report's numbers were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    BruteForce,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::BruteForce => "brute_force",
        }
    }
}

/// Sector `j` of the Bell ensemble: weight `(2j+1) c_j / 2^n` and the log-dimensions
/// of its rotation and permutation factors.
#[derive(Clone, Copy, Debug)]
pub struct SectorWeight {
    pub spin: SpinLabel,
    pub weight: f64,
    pub log2_rotation_dim: f64,
    pub log2_multiplicity: f64,
}

/// All sectors of `n` qubits sorted by descending weight.
pub fn sector_weights(n: usize) -> Result<Vec<SectorWeight>> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let mut out = valid_spins(n)
        .into_iter()
        .map(|spin| {
            let log2_rotation_dim = (spin.dim() as f64).log2();
            // exact integer counts while they fit, log-gamma beyond
            let (weight, log2_multiplicity) = match multiplicity(n, spin) {
                Ok(c) if n < 1000 => {
                    let c = c as f64;
                    (spin.dim() as f64 * c * (-(n as f64)).exp2(), c.log2())
                }
                _ => {
                    let log2_c = log2_multiplicity(n, spin)?;
                    ((log2_c + log2_rotation_dim - n as f64).exp2(), log2_c)
                }
            };
            Ok(SectorWeight {
                spin,
                weight,
                log2_rotation_dim,
                log2_multiplicity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    Ok(out)
}

/// `Σ_j w_j f(j)`, accumulated in the order given (descending weight from [`sector_weights`]).
pub fn weighted_sector_sum(weights: &[SectorWeight], f: impl Fn(&SectorWeight) -> f64) -> f64 {
    weights.iter().map(|w| w.weight * f(w)).sum()
}

/// S_n-constrained entanglement of `n` Bell pairs: `Σ_j w_j log₂(2j+1)`.
pub fn constrained_entanglement_bell_closed(n: usize) -> Result<f64> {
    let weights = sector_weights(n)?;
    Ok(weighted_sector_sum(&weights, |w| w.log2_rotation_dim).max(0.0))
}

/// SU(2)-constrained entanglement of `n` Bell pairs: `Σ_j w_j log₂ c_j`.
pub fn constrained_entanglement_bell_su2_closed(n: usize) -> Result<f64> {
    let weights = sector_weights(n)?;
    Ok(weighted_sector_sum(&weights, |w| w.log2_multiplicity).max(0.0))
}

/// Unconstrained and constrained entanglement of `n` Bell pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementReport {
    pub n_pairs: usize,
    pub unconstrained_ebits: f64,
    pub sn_constrained_ebits: f64,
    pub su2_constrained_ebits: f64,
    pub method: Method,
}

impl EntanglementReport {
    pub fn closed_form(n: usize) -> Result<Self> {
        Ok(Self {
            n_pairs: n,
            unconstrained_ebits: n as f64,
            sn_constrained_ebits: constrained_entanglement_bell_closed(n)?,
            su2_constrained_ebits: constrained_entanglement_bell_su2_closed(n)?,
            method: Method::ClosedForm,
        })
    }

    pub fn unconstrained_per_element(&self) -> f64 {
        self.unconstrained_ebits / self.n_pairs as f64
    }

    pub fn sn_per_element(&self) -> f64 {
        self.sn_constrained_ebits / self.n_pairs as f64
    }

    pub fn su2_per_element(&self) -> f64 {
        self.su2_constrained_ebits / self.n_pairs as f64
    }

    /// `(E_SN + E_SU2) / n`.
    pub fn duality_ratio(&self) -> f64 {
        (self.sn_constrained_ebits + self.su2_constrained_ebits) / self.n_pairs as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticsRow {
    pub n: usize,
    pub sn_ebits: f64,
    pub su2_ebits: f64,
    pub sn_per_element: f64,
    pub duality_ratio: f64,
}

/// Closed-form rows for each `n ≥ 2`, in input order.
pub fn asymptotics_table(n_values: &[usize]) -> Result<Vec<AsymptoticsRow>> {
    n_values
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::OutOfRange(format!("asymptotics rows need n ≥ 2, got {n}")));
            }
            let report = EntanglementReport::closed_form(n)?;
            Ok(AsymptoticsRow {
                n,
                sn_ebits: report.sn_constrained_ebits,
                su2_ebits: report.su2_constrained_ebits,
                sn_per_element: report.sn_per_element(),
                duality_ratio: report.duality_ratio(),
            })
        })
        .collect()
}
