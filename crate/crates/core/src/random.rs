//! Random test objects: Ginibre density operators, Haar-ish unitaries, Kraus channels.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::groups::QuantumChannel;
use crate::linalg::{eigh, DensityOperator, Ket, Operator, C64};

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Ket {
    let g = ginibre(dim, 1, rng);
    Ket::normalized(g.iter().copied().collect()).expect("nonzero Gaussian vector")
}

/// Full-rank mixed state `G G† / Tr(G G†)`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    let g = ginibre(dim, dim, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityOperator::new(Operator::from_matrix(m / tr).expect("square")).expect("valid by construction")
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let g = ginibre(dim, dim, rng);
    Operator::from_matrix(g).expect("square").hermitian_part()
}

/// Unitary from the QR decomposition of a Ginibre matrix, phases fixed by `R`'s diagonal.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let qr = ginibre(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::from(1.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    Operator::from_matrix(q).expect("square")
}

/// Channel with `n_kraus` Kraus operators `A_k S^{-1/2}`, `S = Σ A_k† A_k`.
pub fn random_channel<R: Rng + ?Sized>(dim: usize, n_kraus: usize, rng: &mut R) -> QuantumChannel {
    let raw: Vec<DMatrix<C64>> = (0..n_kraus.max(1)).map(|_| ginibre(dim, dim, rng)).collect();
    let s = raw
        .iter()
        .fold(DMatrix::<C64>::zeros(dim, dim), |acc, a| acc + a.adjoint() * a);
    let eig = eigh(&Operator::from_matrix(s).expect("square")).expect("Hermitian by construction");
    let v = eig.vectors.matrix();
    let inv_sqrt = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        eig.values.iter().map(|&x| C64::from(1.0 / x.sqrt())),
    ));
    let s_inv_sqrt = v * inv_sqrt * v.adjoint();
    let kraus = raw
        .into_iter()
        .map(|a| Operator::from_matrix(a * &s_inv_sqrt).expect("square"))
        .collect();
    QuantumChannel::new(kraus).expect("trace preserving by construction")
}
