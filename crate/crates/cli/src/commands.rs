//! Subcommand bodies. Each returns the text for standard output and an exit status.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssr_core::entanglement::{
    asymptotics_table, bell_ensemble, constrained_entanglement_bell_closed, constrained_entanglement_bell_su2_closed,
    constrained_entanglement_numeric, Method, TwirlPath,
};
use ssr_core::groups::{is_g_covariant, sn_permutation_rep, twirl_finite, u1_twirl, ChargeObservable};
use ssr_core::linalg::{DensityOperator, SubsystemPermute, SubsystemShape};
use ssr_core::random::random_density;
use ssr_core::schur::{
    bipartite_sector_decompose, bipartite_sn_twirl_brute, bipartite_twirl_fast, dimension_identity, multiplicity,
    schur_transform, sn_twirl_fast, valid_spins, Ssr, MAX_DENSE_QUBITS,
};

use crate::error::{CliError, Result};
use crate::files::{format_sig17, ChannelFile, OperatorFile, StateFile};
use crate::report::{render, Format, ReportRow};

/// Output residuals above this fail `twirl` and `verify`.
pub const CHECK_TOL: f64 = 1e-9;
/// Agreement required between closed-form and numeric entanglement.
pub const ENTROPY_TOL: f64 = 1e-8;
pub const MAX_NUMERIC_PAIRS: usize = 4;
pub const MAX_VERIFY_PAIRS: usize = 4;

/// Text for standard output and the process exit status (0 pass, 1 verdict failure).
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub status: u8,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Self { stdout, status: 0 }
    }

    fn verdict(stdout: String, ok: bool) -> Self {
        Self {
            stdout,
            status: if ok { 0 } else { 1 },
        }
    }
}

pub fn multiplicities(n: usize) -> Result<Outcome> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let (sum, total) = dimension_identity(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rows = vec![["2j", "j", "2j+1", "c_j", "(2j+1)c_j"].map(String::from)];
    for spin in valid_spins(n) {
        let c = multiplicity(n, spin)?;
        let d = spin.dim() as u128;
        rows.push([
            spin.two_j().to_string(),
            spin.to_string(),
            d.to_string(),
            c.to_string(),
            (d * c).to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..5).map(|k| rows.iter().map(|r| r[k].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
        writeln!(out, "{}", cells.join("  ")).unwrap();
    }
    let ok = sum == total;
    writeln!(out, "sum {sum} {} 2^{n} = {total}", if ok { "==" } else { "!=" }).unwrap();
    Ok(Outcome::verdict(out, ok))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsrChoice {
    Sn,
    Su2,
    Both,
}

pub fn bell(n: usize, ssr: SsrChoice, method: Method, format: Format) -> Result<Outcome> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let want_sn = ssr != SsrChoice::Su2;
    let want_su2 = ssr != SsrChoice::Sn;
    let (sn, su2) = match method {
        Method::ClosedForm => (
            want_sn.then(|| constrained_entanglement_bell_closed(n)).transpose()?,
            want_su2.then(|| constrained_entanglement_bell_su2_closed(n)).transpose()?,
        ),
        Method::BruteForce => {
            if n > MAX_NUMERIC_PAIRS {
                return Err(CliError::Usage(format!(
                    "the numeric method is limited to --n ≤ {MAX_NUMERIC_PAIRS}, got {n}"
                )));
            }
            let basis = schur_transform(n)?;
            let psi = bell_ensemble(n)?.ket;
            // collective SU(2) has no finite group sum; its twirl runs sector-wise
            let run = |ssr, path| constrained_entanglement_numeric(&psi, n, ssr, &basis, path).map(|(e, _)| e);
            (
                want_sn.then(|| run(Ssr::SymmetricGroup, TwirlPath::BruteForce)).transpose()?,
                want_su2.then(|| run(Ssr::CollectiveSu2, TwirlPath::Fast)).transpose()?,
            )
        }
    };
    let row = ReportRow {
        n,
        unconstrained_ebits: n as f64,
        sn_ebits: sn,
        su2_ebits: su2,
        sn_per_element: sn.map(|e| e / n as f64),
        duality_ratio: sn.zip(su2).map(|(a, b)| (a + b) / n as f64),
        method: method.as_str().into(),
    };
    Ok(Outcome::pass(render(&[row], format)))
}

/// `4, 16, 64, …` up to and including `n_max`.
pub fn geometric_n_values(n_max: usize) -> Vec<usize> {
    std::iter::successors(Some(4usize), |&n| n.checked_mul(4))
        .take_while(|&n| n <= n_max)
        .collect()
}

pub fn sweep(n_values: &[usize], format: Format, out: Option<&Path>) -> Result<Outcome> {
    if n_values.is_empty() {
        return Err(CliError::Usage("the sweep needs at least one n".into()));
    }
    if let Some(&n) = n_values.iter().find(|&&n| n < 2) {
        return Err(CliError::Usage(format!("sweep values must be at least 2, got {n}")));
    }
    let rows: Vec<ReportRow> = asymptotics_table(n_values)?
        .iter()
        .map(ReportRow::from_asymptotics)
        .collect();
    let text = render(&rows, format);
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Write {
                path: path.to_owned(),
                source,
            })?;
            Ok(Outcome::pass(format!("wrote {} rows to {}\n", rows.len(), path.display())))
        }
        None => Ok(Outcome::pass(text)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Sn,
    U1,
}

/// Largest deviation of `rho` under swaps of neighbouring factors; these generate S_n.
fn adjacent_swap_residual(rho: &DensityOperator, shape: &SubsystemShape) -> Result<f64> {
    let n = shape.len();
    let mut worst = 0.0f64;
    for i in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        worst = worst.max(rho.permute_subsystems(shape, &perm)?.max_abs_diff(rho));
    }
    Ok(worst)
}

pub fn twirl(group: Group, input: &Path, output: &Path, fast: bool, generator: Option<&Path>) -> Result<Outcome> {
    let state = StateFile::read(input)?;
    let rho = state.to_density();
    let shape = state.shape.clone();
    let (out, residual) = match group {
        Group::Sn => {
            let dims = shape.dims();
            if dims.iter().any(|&d| d != dims[0]) {
                return Err(CliError::Malformed(format!(
                    "permutation twirl needs equal subsystem_dims, got {dims:?}"
                )));
            }
            let n = dims.len();
            let out = if fast {
                if dims[0] != 2 {
                    return Err(CliError::Usage("--fast supports qubit factors only".into()));
                }
                if n > MAX_DENSE_QUBITS {
                    return Err(CliError::Usage(format!("--fast supports at most {MAX_DENSE_QUBITS} qubits")));
                }
                sn_twirl_fast(&rho, &schur_transform(n)?)?
            } else {
                twirl_finite(&rho, &sn_permutation_rep(n, dims[0])?)?
            };
            let residual = adjacent_swap_residual(&out, &shape)?;
            (out, residual)
        }
        Group::U1 => {
            let path = generator.ok_or_else(|| CliError::Usage("--group u1 requires --generator".into()))?;
            let q = ChargeObservable::new(OperatorFile::read(path)?.operator)?;
            let out = u1_twirl(&rho, &q)?;
            let residual = q.coherence_residual(&out)?;
            (out, residual)
        }
    };
    let out = DensityOperator::new(out.into_operator())?;
    if residual > CHECK_TOL {
        return Err(CliError::Malformed(format!(
            "twirled state is not invariant (residual {residual:e})"
        )));
    }
    StateFile::density(shape, out)?.write(output)?;
    Ok(Outcome::pass(format!(
        "wrote {} (invariance residual {})\n",
        output.display(),
        format_sig17(residual)
    )))
}

pub fn covariance(channel: &Path, n: usize, tol: f64) -> Result<Outcome> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol must be a non-negative number, got {tol}")));
    }
    let ch = ChannelFile::read(channel)?.channel;
    let expected = 1usize
        .checked_shl(n as u32)
        .filter(|_| n < usize::BITS as usize)
        .ok_or_else(|| CliError::Usage(format!("--n {n} is too large")))?;
    if ch.dim() != expected {
        return Err(CliError::Malformed(format!(
            "channel dimension {} does not match 2^{n} = {expected}",
            ch.dim()
        )));
    }
    let rep = sn_permutation_rep(n, 2)?;
    let (ok, residual) = is_g_covariant(&ch, &rep, tol)?;
    let verdict = if ok { "PASS" } else { "FAIL" };
    Ok(Outcome::verdict(
        format!("{verdict} max residual {} (tol {tol:e})\n", format_sig17(residual)),
        ok,
    ))
}

pub fn verify(n: usize) -> Result<Outcome> {
    if n == 0 || n > MAX_VERIFY_PAIRS {
        return Err(CliError::Usage(format!("verify needs 1 ≤ --n ≤ {MAX_VERIFY_PAIRS}, got {n}")));
    }
    let basis = schur_transform(n)?;
    let mut checks: Vec<(&str, f64, f64)> = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + n as u64);
    let rep = sn_permutation_rep(n, 2)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let rho = random_density(1 << n, &mut rng);
        let brute = twirl_finite(&rho, &rep)?;
        worst = worst.max(sn_twirl_fast(&rho, &basis)?.max_abs_diff(&brute));
    }
    checks.push(("single-sided twirl, fast vs brute force", worst, CHECK_TOL));

    let bell = bell_ensemble(n)?.ket.projector();
    let brute = bipartite_sn_twirl_brute(&bell, n)?;
    let fast = bipartite_twirl_fast(&bell, &basis, Ssr::SymmetricGroup)?;
    checks.push(("both-sided twirl of Bell pairs, fast vs brute force", fast.max_abs_diff(&brute), CHECK_TOL));

    let decomposition = bipartite_sector_decompose(&brute, n, &basis)?;
    let rebuilt = decomposition.reconstruct(&basis)?;
    checks.push(("sector reconstruction of twirled Bell pairs", rebuilt.max_abs_diff(&brute), CHECK_TOL));
    checks.push(("sector product form", decomposition.product_residual, CHECK_TOL));

    let psi = bell_ensemble(n)?.ket;
    let (sn, _) = constrained_entanglement_numeric(&psi, n, Ssr::SymmetricGroup, &basis, TwirlPath::BruteForce)?;
    let (su2, _) = constrained_entanglement_numeric(&psi, n, Ssr::CollectiveSu2, &basis, TwirlPath::Fast)?;
    checks.push((
        "S_n entanglement, closed form vs numeric",
        (sn - constrained_entanglement_bell_closed(n)?).abs(),
        ENTROPY_TOL,
    ));
    checks.push((
        "SU(2) entanglement, closed form vs numeric",
        (su2 - constrained_entanglement_bell_su2_closed(n)?).abs(),
        ENTROPY_TOL,
    ));

    let mut out = String::new();
    let mut all_ok = true;
    for (name, residual, tol) in &checks {
        let ok = residual <= tol;
        all_ok &= ok;
        writeln!(
            out,
            "{}  {name}: residual {} (tol {tol:e})",
            if ok { "PASS" } else { "FAIL" },
            format_sig17(*residual)
        )
        .unwrap();
    }
    let passed = checks.iter().filter(|(_, r, t)| r <= t).count();
    writeln!(out, "{passed}/{} checks passed for n = {n}", checks.len()).unwrap();
    Ok(Outcome::verdict(out, all_ok))
}
