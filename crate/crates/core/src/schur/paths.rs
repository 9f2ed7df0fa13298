use super::SpinLabel;

/// Intermediate total spins after adding each qubit; `steps[0] = ½`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CouplingPath {
    steps: Vec<SpinLabel>,
}

impl CouplingPath {
    /// Validates the path: starts at ½, steps by ±½, never negative.
    pub fn new(steps: Vec<SpinLabel>) -> Option<Self> {
        let first = *steps.first()?;
        if first != SpinLabel::HALF {
            return None;
        }
        let valid = steps
            .windows(2)
            .all(|w| w[0].two_j().abs_diff(w[1].two_j()) == 1);
        valid.then_some(Self { steps })
    }

    pub fn steps(&self) -> &[SpinLabel] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn terminal(&self) -> SpinLabel {
        *self.steps.last().expect("paths are nonempty")
    }
}

/// Every coupling path of `n` qubits, grouped by ascending terminal spin,
/// lexicographic within a group.
pub fn coupling_paths(n: usize) -> Vec<CouplingPath> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut stack = vec![1usize];
    extend(&mut stack, n, &mut out);
    // DFS visits the down-step first, so `out` is already lexicographic;
    // a stable sort by terminal keeps that order inside each group.
    out.sort_by_key(|p: &CouplingPath| p.terminal());
    out
}

fn extend(stack: &mut Vec<usize>, n: usize, out: &mut Vec<CouplingPath>) {
    if stack.len() == n {
        out.push(CouplingPath {
            steps: stack.iter().map(|&t| SpinLabel::from_two_j(t)).collect(),
        });
        return;
    }
    let last = *stack.last().unwrap();
    if last > 0 {
        stack.push(last - 1);
        extend(stack, n, out);
        stack.pop();
    }
    stack.push(last + 1);
    extend(stack, n, out);
    stack.pop();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::{multiplicity, valid_spins};

    fn two_js(p: &CouplingPath) -> Vec<usize> {
        p.steps().iter().map(|s| s.two_j()).collect()
    }

    #[test]
    fn two_qubits() {
        let paths = coupling_paths(2);
        assert_eq!(paths.iter().map(two_js).collect::<Vec<_>>(), vec![vec![1, 0], vec![1, 2]]);
    }

    #[test]
    fn three_qubits() {
        let paths = coupling_paths(3);
        let got: Vec<_> = paths.iter().map(two_js).collect();
        assert_eq!(got, vec![vec![1, 0, 1], vec![1, 2, 1], vec![1, 2, 3]]);
    }

    #[test]
    fn four_qubits_spin_one() {
        let count = coupling_paths(4)
            .iter()
            .filter(|p| p.terminal().two_j() == 2)
            .count();
        assert_eq!(count, 3);
    }

    #[test]
    fn group_sizes_match_multiplicities() {
        for n in 1..=16 {
            let paths = coupling_paths(n);
            for j in valid_spins(n) {
                let count = paths.iter().filter(|p| p.terminal() == j).count() as u128;
                assert_eq!(count, multiplicity(n, j).unwrap(), "n={n} j={j}");
            }
            // grouped ascending, lexicographic within groups
            assert!(paths.windows(2).all(|w| (w[0].terminal(), &w[0]) < (w[1].terminal(), &w[1])));
        }
    }

    #[test]
    fn path_validation() {
        let s = SpinLabel::from_two_j;
        assert!(CouplingPath::new(vec![s(1), s(2), s(3)]).is_some());
        assert!(CouplingPath::new(vec![s(1), s(3)]).is_none());
        assert!(CouplingPath::new(vec![s(0), s(1)]).is_none());
        assert!(CouplingPath::new(vec![]).is_none());
    }
}
