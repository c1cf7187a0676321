//! Truncated photon ⊗ three-qubit product basis and the stationary-cavity
//! Hamiltonians built on it.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::params::SystemParams;

pub const QUBITS: usize = 3;
/// Number of qubit configurations per photon number.
pub const CONFIGS: usize = 1 << QUBITS;

/// Product state `|n; q1 q2 q3>`. Qubit 1 is the most significant bit of
/// `qubits`, so ordering by `(photons, qubits)` is the lexicographic basis
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState {
    pub photons: usize,
    pub qubits: u8,
}

impl BasisState {
    pub fn new(photons: usize, qubits: u8) -> Self {
        assert!((qubits as usize) < CONFIGS, "qubit configuration {qubits} out of range");
        Self { photons, qubits }
    }

    /// Builds from bits `(q1, q2, q3)`.
    pub fn from_bits(photons: usize, bits: [u8; QUBITS]) -> Self {
        let q = bits.iter().fold(0u8, |acc, &b| {
            assert!(b <= 1, "qubit bit must be 0 or 1");
            (acc << 1) | b
        });
        Self::new(photons, q)
    }

    pub fn vacuum() -> Self {
        Self::new(0, 0)
    }

    /// Mask of qubit `j` (0-based, qubit 1 first).
    pub fn mask(j: usize) -> u8 {
        1 << (QUBITS - 1 - j)
    }

    pub fn is_excited(&self, j: usize) -> bool {
        self.qubits & Self::mask(j) != 0
    }

    pub fn excitations(&self) -> usize {
        self.qubits.count_ones() as usize
    }

    pub fn bits(&self) -> [u8; QUBITS] {
        std::array::from_fn(|j| self.is_excited(j) as u8)
    }

    /// Moves the content of slot `j` to slot `perm[j]`.
    pub fn permuted(&self, perm: [usize; QUBITS]) -> Self {
        let mut q = 0u8;
        for (j, &target) in perm.iter().enumerate() {
            if self.is_excited(j) {
                q |= Self::mask(target);
            }
        }
        Self::new(self.photons, q)
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.bits();
        write!(f, "{};{}{}{}", self.photons, a, b, c)
    }
}

/// All qubit configurations with `m` excited qubits, in basis order.
pub fn configs_with(m: usize) -> impl Iterator<Item = u8> {
    (0..CONFIGS as u8).filter(move |q| q.count_ones() as usize == m)
}

/// The six permutations of three qubit slots.
pub fn slot_permutations() -> [[usize; QUBITS]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Ordered product basis for a photon cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    nmax: usize,
}

impl Basis {
    pub fn new(nmax: usize) -> Self {
        Self { nmax }
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn len(&self) -> usize {
        CONFIGS * (self.nmax + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, s: BasisState) -> bool {
        s.photons <= self.nmax
    }

    pub fn index_of(&self, s: BasisState) -> Option<usize> {
        self.contains(s).then(|| CONFIGS * s.photons + s.qubits as usize)
    }

    pub fn state(&self, index: usize) -> BasisState {
        assert!(index < self.len(), "basis index {index} out of range");
        BasisState::new(index / CONFIGS, (index % CONFIGS) as u8)
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        (0..self.len()).map(|i| self.state(i))
    }
}

pub fn build_basis(nmax: usize) -> Vec<BasisState> {
    Basis::new(nmax).states().collect()
}

/// Sparse complex amplitudes over basis states. Not necessarily normalized.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StateVector {
    amplitudes: BTreeMap<BasisState, Complex64>,
}

impl StateVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis_state(s: BasisState) -> Self {
        let mut v = Self::new();
        v.add(s, Complex64::new(1.0, 0.0));
        v
    }

    pub fn add(&mut self, s: BasisState, c: Complex64) {
        *self.amplitudes.entry(s).or_default() += c;
    }

    pub fn add_real(&mut self, s: BasisState, c: f64) {
        self.add(s, Complex64::new(c, 0.0));
    }

    pub fn get(&self, s: BasisState) -> Complex64 {
        self.amplitudes.get(&s).copied().unwrap_or_default()
    }

    /// States carrying a nonzero amplitude.
    pub fn support(&self) -> impl Iterator<Item = BasisState> + '_ {
        self.amplitudes
            .iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(s, _)| *s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisState, Complex64)> + '_ {
        self.amplitudes.iter().map(|(s, c)| (*s, *c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .filter_map(|(s, c)| other.amplitudes.get(s).map(|d| c.conj() * d))
            .sum()
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|(s, c)| (*s, c * k)).collect(),
        }
    }

    pub fn normalized(&self) -> Self {
        self.scaled(Complex64::new(1.0 / self.norm(), 0.0))
    }

    pub fn plus(&self, other: &StateVector) -> Self {
        let mut out = self.clone();
        for (s, c) in other.iter() {
            out.add(s, c);
        }
        out
    }

    pub fn minus(&self, other: &StateVector) -> Self {
        self.plus(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn from_real_dense(basis: &Basis, v: &[f64]) -> Self {
        let mut out = Self::new();
        for (i, &c) in v.iter().enumerate() {
            if c != 0.0 {
                out.add_real(basis.state(i), c);
            }
        }
        out
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, c) in self.iter() {
            if c.im == 0.0 {
                writeln!(f, "{:+.6e} × |{}⟩", c.re, s)?;
            } else {
                writeln!(f, "({:+.6e}{:+.6e}i) × |{}⟩", c.re, c.im, s)?;
            }
        }
        Ok(())
    }
}

/// Dense real symmetric operator on a truncated basis, in GHz.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    basis: Basis,
    matrix: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn zeros(basis: Basis) -> Self {
        let d = basis.len();
        Self {
            basis,
            matrix: DMatrix::zeros(d, d),
        }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `<bra|M|ket>`; zero for states outside the truncation.
    pub fn element(&self, bra: BasisState, ket: BasisState) -> f64 {
        match (self.basis.index_of(bra), self.basis.index_of(ket)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => 0.0,
        }
    }

    fn add_symmetric(&mut self, a: BasisState, b: BasisState, value: f64) {
        let (Some(i), Some(j)) = (self.basis.index_of(a), self.basis.index_of(b)) else {
            return;
        };
        self.matrix[(i, j)] += value;
        if i != j {
            self.matrix[(j, i)] += value;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.amax()
    }

    pub fn is_symmetric(&self) -> bool {
        let tol = 1e-12 * self.max_abs();
        let d = self.dim();
        (0..d).all(|i| (0..i).all(|j| (self.matrix[(i, j)] - self.matrix[(j, i)]).abs() <= tol))
    }

    /// Nonzero entries `(row, col, value)` with `row <= col`.
    pub fn upper_entries(&self) -> Vec<(BasisState, BasisState, f64)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i..d {
                let v = self.matrix[(i, j)];
                if v != 0.0 {
                    out.push((self.basis.state(i), self.basis.state(j), v));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        let d = self.dim();
        let mut out = StateVector::new();
        for (s, c) in v.iter() {
            let Some(j) = self.basis.index_of(s) else { continue };
            for i in 0..d {
                let m = self.matrix[(i, j)];
                if m != 0.0 {
                    out.add(self.basis.state(i), c * m);
                }
            }
        }
        out
    }

    pub fn plus(&self, other: &OperatorMatrix) -> Self {
        assert_eq!(self.basis, other.basis, "operators live on different bases");
        Self {
            basis: self.basis.clone(),
            matrix: &self.matrix + &other.matrix,
        }
    }

    /// Dense CSV, row-major, header of basis labels.
    pub fn to_csv(&self) -> String {
        let labels: Vec<String> = self.basis.states().map(|s| s.to_string()).collect();
        let mut out = String::new();
        out.push_str("state,");
        out.push_str(&labels.join(","));
        out.push('\n');
        for (i, label) in labels.iter().enumerate() {
            out.push_str(label);
            for j in 0..self.dim() {
                out.push(',');
                out.push_str(&crate::report::sci(self.matrix[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}

/// Diagonal `n·omega + e0·(excited qubits)`.
pub fn hamiltonian_h0(p: &SystemParams, omega: f64) -> OperatorMatrix {
    let mut h = OperatorMatrix::zeros(Basis::new(p.nmax()));
    for (i, s) in Basis::new(p.nmax()).states().enumerate() {
        h.matrix[(i, i)] = s.photons as f64 * omega + s.excitations() as f64 * p.e0();
    }
    h
}

/// Counter-rotating coupling `λ Σ_j (σ⁺_j a† + σ⁻_j a)`. Raising past the
/// cutoff is dropped.
pub fn hamiltonian_v(p: &SystemParams) -> OperatorMatrix {
    let basis = Basis::new(p.nmax());
    let mut v = OperatorMatrix::zeros(basis.clone());
    for s in basis.states() {
        for j in 0..QUBITS {
            if s.is_excited(j) {
                continue;
            }
            let up = BasisState::new(s.photons + 1, s.qubits | BasisState::mask(j));
            v.add_symmetric(up, s, p.lambda() * ((s.photons + 1) as f64).sqrt());
        }
    }
    v
}

/// Rotating-wave coupling `λ Σ_j (σ⁺_j a + σ⁻_j a†)`.
pub fn hamiltonian_v_rwa(p: &SystemParams) -> OperatorMatrix {
    let basis = Basis::new(p.nmax());
    let mut v = OperatorMatrix::zeros(basis.clone());
    for s in basis.states() {
        if s.photons == 0 {
            continue;
        }
        for j in 0..QUBITS {
            if s.is_excited(j) {
                continue;
            }
            let up = BasisState::new(s.photons - 1, s.qubits | BasisState::mask(j));
            v.add_symmetric(up, s, p.lambda() * (s.photons as f64).sqrt());
        }
    }
    v
}

/// `H0 + V`, or the full stationary Hamiltonian `H0 + V + V_RWA`.
pub fn hamiltonian_total(p: &SystemParams, omega: f64, include_rwa: bool) -> OperatorMatrix {
    let h = hamiltonian_h0(p, omega).plus(&hamiltonian_v(p));
    if include_rwa {
        h.plus(&hamiltonian_v_rwa(p))
    } else {
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(n: usize, bits: [u8; 3]) -> BasisState {
        BasisState::from_bits(n, bits)
    }

    fn params(lambda: f64, nmax: usize) -> SystemParams {
        SystemParams::new(5.0, 3.75, 3.721, lambda, nmax).unwrap()
    }

    #[test]
    fn basis_order() {
        let b = build_basis(0);
        assert_eq!(b.len(), 8);
        assert_eq!(b[0], st(0, [0, 0, 0]));
        assert_eq!(b[7], st(0, [1, 1, 1]));
        assert_eq!(build_basis(2).len(), 24);
        let basis = Basis::new(3);
        assert_eq!(basis.index_of(st(1, [1, 0, 0])), Some(12));
        for (i, s) in basis.states().enumerate() {
            assert_eq!(basis.index_of(s), Some(i));
        }
        assert!(build_basis(4).windows(2).all(|w| w[0] < w[1]));
        assert_eq!(basis.index_of(st(4, [0, 0, 0])), None);
    }

    #[test]
    fn labels() {
        assert_eq!(st(2, [1, 0, 1]).to_string(), "2;101");
        assert_eq!(st(2, [1, 0, 1]).excitations(), 2);
        assert_eq!(st(0, [1, 0, 0]).permuted([2, 0, 1]), st(0, [0, 0, 1]));
    }

    #[test]
    fn h0_diagonal() {
        let p = params(0.2, 4);
        let h = hamiltonian_h0(&p, 5.0);
        assert_eq!(h.element(st(0, [0, 0, 0]), st(0, [0, 0, 0])), 0.0);
        assert_eq!(h.element(st(1, [1, 1, 0]), st(1, [1, 1, 0])), 5.0 + 2.0 * 3.721);
        assert_eq!(h.element(st(3, [1, 1, 1]), st(3, [1, 1, 1])), 15.0 + 3.0 * 3.721);
        assert_eq!(h.upper_entries().len(), h.dim() - 1);
    }

    #[test]
    fn counter_rotating_elements() {
        let p = params(0.2, 4);
        let v = hamiltonian_v(&p);
        assert_eq!(v.element(st(1, [1, 0, 0]), st(0, [0, 0, 0])), 0.2);
        assert!((v.element(st(2, [1, 1, 0]), st(1, [1, 0, 0])) - 0.2 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(v.element(st(1, [0, 1, 0]), st(1, [1, 0, 0])), 0.0);
        for (a, b, val) in v.upper_entries() {
            let (na, ma) = (a.photons as i64, a.excitations() as i64);
            let (nb, mb) = (b.photons as i64, b.excitations() as i64);
            assert_eq!((nb - na).abs(), 1);
            assert_eq!(nb - na, mb - ma);
            assert_eq!(((na + ma) - (nb + mb)).abs(), 2);
            assert!((val - 0.2 * (na.max(nb) as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn rotating_wave_elements() {
        let p = params(0.2, 4);
        let v = hamiltonian_v_rwa(&p);
        assert_eq!(v.element(st(0, [1, 0, 0]), st(1, [0, 0, 0])), 0.2);
        assert_eq!(v.element(st(1, [1, 0, 0]), st(0, [0, 0, 0])), 0.0);
        for (a, b, _) in v.upper_entries() {
            assert_eq!(a.photons + a.excitations(), b.photons + b.excitations());
        }
        // every state with a photon to give and a ground qubit couples upward
        // to exactly (number of ground qubits) partners
        for s in v.basis().states() {
            if s.photons == 0 {
                continue;
            }
            let up = v
                .basis()
                .states()
                .filter(|t| t.excitations() == s.excitations() + 1 && v.element(*t, s) != 0.0)
                .count();
            assert_eq!(up, QUBITS - s.excitations());
        }
    }

    #[test]
    fn total_hamiltonian_structure() {
        let p = params(0.2, 4);
        let zero = SystemParams::new(5.0, 3.75, 3.721, 1e-300, 4).unwrap();
        let h = hamiltonian_total(&zero, 5.0, false);
        let h0 = hamiltonian_h0(&zero, 5.0);
        assert!((h.matrix() - h0.matrix()).amax() < 1e-290);

        for rwa in [false, true] {
            let h = hamiltonian_total(&p, 5.0, rwa);
            assert!(h.is_symmetric());
            assert_eq!(h.matrix(), &h.matrix().transpose());
            for (a, b, _) in h.upper_entries() {
                assert_eq!((a.photons + a.excitations()) % 2, (b.photons + b.excitations()) % 2);
            }
        }
        let full = hamiltonian_total(&p, 5.0, true);
        let split = hamiltonian_h0(&p, 5.0)
            .plus(&hamiltonian_v(&p))
            .plus(&hamiltonian_v_rwa(&p));
        assert_eq!(full, split);
    }

    #[test]
    fn qubit_permutation_symmetry() {
        let p = params(0.3, 3);
        let h = hamiltonian_total(&p, 4.2, true);
        let states: Vec<_> = h.basis().states().collect();
        for perm in slot_permutations() {
            for &a in &states {
                for &b in &states {
                    assert_eq!(h.element(a.permuted(perm), b.permuted(perm)), h.element(a, b));
                }
            }
        }
    }

    #[test]
    fn cutoff_drops_raising() {
        let p = params(0.2, 2);
        let v = hamiltonian_v(&p);
        let top = st(2, [0, 0, 0]);
        let out = v.apply(&StateVector::basis_state(top));
        assert!(out.support().all(|s| s.photons == 1));
    }

    #[test]
    fn csv_dump_shape() {
        let p = params(0.2, 2);
        let csv = hamiltonian_total(&p, 5.0, false).to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 25);
        assert!(lines[0].starts_with("state,0;000,0;001"));
        assert!(lines[1].starts_with("0;000,0.000000000e0"));
    }

    #[test]
    fn state_vector_algebra() {
        let mut v = StateVector::basis_state(st(0, [0, 0, 0]));
        v.add_real(st(1, [1, 0, 0]), 3.0);
        assert_eq!(v.norm_sqr(), 10.0);
        assert_eq!(v.inner(&v).re, 10.0);
        assert!((v.normalized().norm() - 1.0).abs() < 1e-15);
        assert_eq!(v.minus(&v).norm(), 0.0);
        assert!(v.to_string().contains("× |1;100⟩"));
    }
}
