use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::FiniteGroupRep;
use crate::error::{Error, Result};
use crate::linalg::{eigh, max_abs_diff, tol, DensityOperator, Operator, C64};

/// Eigenvalues further than this from an integer are rejected.
const INTEGER_TOL: f64 = 1e-8;

/// A Hermitian generator `Q` with integer spectrum and its eigenspace projectors.
#[derive(Clone, Debug)]
pub struct ChargeObservable {
    generator: Operator,
    /// `(q, Π_q)`, ascending in `q`.
    sectors: Vec<(i64, Operator)>,
}

impl ChargeObservable {
    pub fn new(q: Operator) -> Result<Self> {
        let eig = eigh(&q)?;
        let dim = q.dim();
        let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (k, &value) in eig.values.iter().enumerate() {
            let rounded = value.round();
            if (value - rounded).abs() > INTEGER_TOL {
                return Err(Error::NonIntegerCharge { eigenvalue: value });
            }
            groups.entry(rounded as i64).or_default().push(k);
        }
        let v = eig.vectors.matrix();
        let sectors: Vec<(i64, Operator)> = groups
            .into_iter()
            .map(|(charge, cols)| {
                let proj = cols.iter().fold(DMatrix::<C64>::zeros(dim, dim), |acc, &k| {
                    let col = v.column(k);
                    acc + col * col.adjoint()
                });
                (charge, Operator::from_matrix_unchecked(proj))
            })
            .collect();
        let total = sectors
            .iter()
            .fold(DMatrix::<C64>::zeros(dim, dim), |acc, (_, p)| acc + p.matrix());
        let residual = max_abs_diff(&total, &DMatrix::identity(dim, dim));
        if residual > tol::VALIDATION {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { generator: q, sectors })
    }

    pub fn generator(&self) -> &Operator {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn charges(&self) -> Vec<i64> {
        self.sectors.iter().map(|(q, _)| *q).collect()
    }

    pub fn projector(&self, charge: i64) -> Option<&Operator> {
        self.sectors.iter().find(|(q, _)| *q == charge).map(|(_, p)| p)
    }

    pub fn projectors(&self) -> impl Iterator<Item = (i64, &Operator)> {
        self.sectors.iter().map(|(q, p)| (*q, p))
    }

    /// `exp(iξQ) = Σ_q e^{iξq} Π_q`.
    pub fn rotation(&self, xi: f64) -> Operator {
        let dim = self.dim();
        let m = self
            .sectors
            .iter()
            .fold(DMatrix::<C64>::zeros(dim, dim), |acc, (q, p)| {
                acc + p.matrix() * C64::from_polar(1.0, xi * *q as f64)
            });
        Operator::from_matrix_unchecked(m)
    }

    /// The cyclic subgroup `{exp(2πi m Q / order)}` for `m = 0..order`.
    pub fn cyclic_rep(&self, order: usize) -> Result<FiniteGroupRep> {
        if order == 0 {
            return Err(Error::Empty("cyclic group order"));
        }
        let step = std::f64::consts::TAU / order as f64;
        let elements = (0..order).map(|m| self.rotation(step * m as f64)).collect();
        let names = (0..order).map(|m| format!("exp(2πi·{m}Q/{order})")).collect();
        FiniteGroupRep::new(format!("Z{order}"), elements, names)
    }

    /// Largest `|Π_q X Π_q'|` over distinct charges.
    pub fn coherence_residual(&self, x: &Operator) -> Result<f64> {
        x.check_dim(self.dim())?;
        let mut worst: f64 = 0.0;
        for (qa, pa) in &self.sectors {
            for (qb, pb) in &self.sectors {
                if qa != qb {
                    let block = pa.matrix() * x.matrix() * pb.matrix();
                    worst = block.iter().map(|z| z.norm()).fold(worst, f64::max);
                }
            }
        }
        Ok(worst)
    }
}

/// U(1) twirl: projection onto the eigenspaces of the charge, `Σ_q Π_q ρ Π_q`.
pub fn u1_twirl(rho: &DensityOperator, q: &ChargeObservable) -> Result<DensityOperator> {
    rho.check_dim(q.dim())?;
    let dim = q.dim();
    let out = q
        .sectors
        .iter()
        .fold(DMatrix::<C64>::zeros(dim, dim), |acc, (_, p)| {
            acc + p.matrix() * rho.matrix() * p.matrix()
        });
    Ok(DensityOperator::from_operator_unchecked(Operator::from_matrix_unchecked(out)))
}
