//! Ground-state spin Hamiltonian of a single NV·¹⁵N center and the
//! closed-form approximations built on top of it.
//!
//! The six-dimensional product basis |m_S, m_I⟩ is fixed throughout the
//! crate, ordered by electron projection first, nuclear projection second:
//!
//! index 0: |−1, −1/2⟩, 1: |−1, +1/2⟩, 2: |0, −1/2⟩,
//! index 3: |0, +1/2⟩,  4: |+1, −1/2⟩, 5: |+1, +1/2⟩.
//!
//! All energies are ordinary frequencies in hertz (E/h), all fields in
//! tesla, matching the /2π convention the constants are quoted in.

use nalgebra::{Complex, Matrix2, Matrix3, Matrix6, Vector6};

use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// Number of basis states.
pub const DIM: usize = 6;

/// Electron-spin projections in basis order.
pub const MS_OF_INDEX: [i32; DIM] = [-1, -1, 0, 0, 1, 1];
/// Doubled nuclear-spin projections (2·m_I) in basis order.
pub const MI2_OF_INDEX: [i32; DIM] = [-1, 1, -1, 1, -1, 1];

/// Basis index of |m_S, m_I⟩ with `mi2 = 2 m_I ∈ {−1, +1}`.
pub fn basis_index(ms: i32, mi2: i32) -> usize {
    debug_assert!((-1..=1).contains(&ms) && (mi2 == -1 || mi2 == 1));
    (2 * (ms + 1) + (mi2 + 1) / 2) as usize
}

/// Parameters of the ground-state spin Hamiltonian.
///
/// Defaults are the literature values for an NV formed with ¹⁵N:
/// D = 2.87 GHz, γ_e = 28 GHz/T, γ_I = −4.3 MHz/T, A_z = 3.03 MHz,
/// A_⊥ = 3.65 MHz, and the hyperfine-enhanced transverse nuclear
/// gyromagnetic ratio γ_I,⊥ = 75 MHz/T.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpinConstants {
    /// Zero-field splitting, Hz.
    pub d: f64,
    /// Electron gyromagnetic ratio, Hz/T.
    pub gamma_e: f64,
    /// Bare ¹⁵N nuclear gyromagnetic ratio, Hz/T (negative for ¹⁵N).
    pub gamma_i: f64,
    /// Secular hyperfine component, Hz.
    pub a_z: f64,
    /// Non-secular hyperfine component, Hz.
    pub a_perp: f64,
    /// Effective transverse nuclear gyromagnetic ratio, Hz/T.
    pub gamma_i_perp: f64,
}

impl Default for SpinConstants {
    fn default() -> Self {
        SpinConstants {
            d: 2.87e9,
            gamma_e: 28.0e9,
            gamma_i: -4.3e6,
            a_z: 3.03e6,
            a_perp: 3.65e6,
            gamma_i_perp: 75.0e6,
        }
    }
}

impl SpinConstants {
    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0 && self.gamma_e > 0.0 && self.a_z > 0.0 && self.a_perp > 0.0) {
            return Err(Error::validation(
                "D, gamma_e, A_z and A_perp must be positive",
            ));
        }
        if self.gamma_i >= 0.0 {
            return Err(Error::validation("gamma_i must be negative for 15N"));
        }
        if self.gamma_i_perp <= 0.0 {
            return Err(Error::validation("gamma_i_perp must be positive"));
        }
        Ok(())
    }
}

/// Magnetic field expressed in the NV frame (z along the NV symmetry axis).
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct NvFrameField {
    /// Tesla.
    pub b_x: f64,
    /// Tesla.
    pub b_y: f64,
    /// Tesla.
    pub b_z: f64,
}

impl NvFrameField {
    pub fn new(b_x: f64, b_y: f64, b_z: f64) -> Self {
        NvFrameField { b_x, b_y, b_z }
    }

    /// Purely axial field.
    pub fn axial(b_z: f64) -> Self {
        NvFrameField::new(0.0, 0.0, b_z)
    }

    /// Transverse magnitude √(B_x² + B_y²), ≥ 0.
    pub fn b_perp(&self) -> f64 {
        self.b_x.hypot(self.b_y)
    }

    pub fn magnitude(&self) -> f64 {
        (self.b_x * self.b_x + self.b_y * self.b_y + self.b_z * self.b_z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.b_x.is_finite() && self.b_y.is_finite() && self.b_z.is_finite()
    }
}

/// 6×6 Hamiltonian over the fixed |m_S, m_I⟩ basis, entries in hertz.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrix {
    m: Matrix6<C64>,
}

impl SpinMatrix {
    pub fn from_matrix(m: Matrix6<C64>) -> Self {
        SpinMatrix { m }
    }

    pub fn matrix(&self) -> &Matrix6<C64> {
        &self.m
    }

    /// max |H − H†| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.m.adjoint();
        (self.m - adj)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude.
    pub fn max_entry(&self) -> f64 {
        self.m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Hermitian within the documented 10⁻⁹ relative bound.
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= 1e-9 * self.max_entry().max(1.0)
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Spin-1 operators in the m_S = −1, 0, +1 basis, built from ladder
/// operators normalized as S₊|m⟩ = √(S(S+1) − m(m+1)) |m+1⟩.
fn spin1_operators() -> (Matrix3<C64>, Matrix3<C64>, Matrix3<C64>) {
    let sqrt2 = c(2.0f64.sqrt());
    let zero = c(0.0);
    let mut s_plus = Matrix3::from_element(zero);
    s_plus[(1, 0)] = sqrt2; // ⟨0|S₊|−1⟩
    s_plus[(2, 1)] = sqrt2; // ⟨+1|S₊|0⟩
    let s_minus = s_plus.adjoint();
    let s_x = (s_plus + s_minus) * c(0.5);
    let s_y = (s_plus - s_minus) * C64::new(0.0, -0.5);
    let s_z = Matrix3::from_diagonal(&nalgebra::Vector3::new(c(-1.0), c(0.0), c(1.0)));
    (s_x, s_y, s_z)
}

/// Spin-1/2 operators in the m_I = −1/2, +1/2 basis.
fn spin_half_operators() -> (Matrix2<C64>, Matrix2<C64>, Matrix2<C64>) {
    let zero = c(0.0);
    let mut i_plus = Matrix2::from_element(zero);
    i_plus[(1, 0)] = c(1.0); // ⟨+1/2|I₊|−1/2⟩
    let i_minus = i_plus.adjoint();
    let i_x = (i_plus + i_minus) * c(0.5);
    let i_y = (i_plus - i_minus) * C64::new(0.0, -0.5);
    let i_z = Matrix2::from_diagonal(&nalgebra::Vector2::new(c(-0.5), c(0.5)));
    (i_x, i_y, i_z)
}

/// Full spin Hamiltonian
/// H = D S_z² + γ_e B·S + γ_I B·I + A_z S_z I_z + A_⊥ (S_x I_x + S_y I_y).
///
/// The transverse hyperfine term is A_⊥ (S_x I_x + S_y I_y)
/// = (A_⊥/2)(S₊I₋ + S₋I₊); this is the convention under which the
/// tabulated A_⊥ reproduces the enhanced transverse nuclear response
/// γ_I,⊥ ≈ |γ_I − 2 γ_e A_⊥ / D| ≈ 75 MHz/T.
pub fn build_hamiltonian(constants: &SpinConstants, field: &NvFrameField) -> SpinMatrix {
    let (s_x, s_y, s_z) = spin1_operators();
    let (i_x, i_y, i_z) = spin_half_operators();
    let id2 = Matrix2::identity();
    let id3 = Matrix3::identity();

    let sz2 = s_z * s_z;
    let electron_zeeman = s_x * c(field.b_x) + s_y * c(field.b_y) + s_z * c(field.b_z);
    let nuclear_zeeman = i_x * c(field.b_x) + i_y * c(field.b_y) + i_z * c(field.b_z);

    let m = sz2.kronecker(&id2) * c(constants.d)
        + electron_zeeman.kronecker(&id2) * c(constants.gamma_e)
        + id3.kronecker(&nuclear_zeeman) * c(constants.gamma_i)
        + s_z.kronecker(&i_z) * c(constants.a_z)
        + (s_x.kronecker(&i_x) + s_y.kronecker(&i_y)) * c(constants.a_perp);

    SpinMatrix::from_matrix(m)
}

/// Transition matrix element ⟨m_S = 0 | S_x | m_S = −1⟩ of the spin-1
/// operator, computed from the ladder-operator construction.
pub fn sx_matrix_element() -> f64 {
    sx_element(0, -1)
}

/// ⟨bra_ms | S_x | ket_ms⟩ for the spin-1 operator.
pub fn sx_element(bra_ms: i32, ket_ms: i32) -> f64 {
    let (s_x, _, _) = spin1_operators();
    s_x[((bra_ms + 1) as usize, (ket_ms + 1) as usize)].re
}

/// Sorted eigen-decomposition of a hermitian [`SpinMatrix`].
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending (up to the degenerate-group tie tolerance of
    /// 10⁻¹² × max entry, inside which deterministic basis-order
    /// tie-breaking wins), hertz.
    pub eigenvalues: Vector6<f64>,
    /// Column k is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: Matrix6<C64>,
}

impl EigenSystem {
    /// Assign each basis label |m_S, m_I⟩ the eigenstate with the largest
    /// overlap (greedy, largest overlaps first). Returns `label_to_state`
    /// such that `label_to_state[basis_index]` is the eigenstate index.
    pub fn label_by_overlap(&self) -> [usize; DIM] {
        let mut overlaps = Vec::with_capacity(DIM * DIM);
        for basis in 0..DIM {
            for state in 0..DIM {
                overlaps.push((self.eigenvectors[(basis, state)].norm_sqr(), basis, state));
            }
        }
        overlaps.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut label_to_state = [usize::MAX; DIM];
        let mut basis_used = [false; DIM];
        let mut state_used = [false; DIM];
        for (_, basis, state) in overlaps {
            if !basis_used[basis] && !state_used[state] {
                basis_used[basis] = true;
                state_used[state] = true;
                label_to_state[basis] = state;
            }
        }
        label_to_state
    }

    /// Energy of the eigenstate labeled |m_S, m_I⟩.
    pub fn energy_of(&self, ms: i32, mi2: i32) -> f64 {
        let labels = self.label_by_overlap();
        self.eigenvalues[labels[basis_index(ms, mi2)]]
    }

    /// Splitting of the two eigenstates dominated by the m_S = 0 manifold.
    pub fn ms0_splitting(&self) -> f64 {
        let labels = self.label_by_overlap();
        (self.eigenvalues[labels[basis_index(0, 1)]]
            - self.eigenvalues[labels[basis_index(0, -1)]])
        .abs()
    }
}

/// Exact diagonalization of a hermitian spin matrix.
///
/// Eigenvalues are returned ascending; degenerate groups are ordered by
/// the dominant basis index of their eigenvectors and each eigenvector's
/// phase is fixed so its largest component is real and positive.
pub fn eigensystem(h: &SpinMatrix) -> Result<EigenSystem> {
    if !h.is_hermitian() {
        return Err(Error::validation(format!(
            "matrix is not hermitian: defect {:.3e} exceeds 1e-9 x max entry {:.3e}",
            h.hermiticity_defect(),
            h.max_entry()
        )));
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(*h.matrix());

    let scale = h.max_entry().max(1.0);
    let tie_tol = 1e-12 * scale;

    let mut order: Vec<usize> = (0..DIM).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    // Deterministic ordering inside (near-)degenerate groups: by the basis
    // index each eigenvector is concentrated on.
    let dominant_basis = |k: usize| -> usize {
        let col = eig.eigenvectors.column(k);
        let mut best = 0;
        let mut best_w = -1.0;
        for (i, v) in col.iter().enumerate() {
            let w = v.norm_sqr();
            if w > best_w {
                best_w = w;
                best = i;
            }
        }
        best
    };
    let mut start = 0;
    while start < DIM {
        let mut end = start + 1;
        while end < DIM
            && (eig.eigenvalues[order[end]] - eig.eigenvalues[order[start]]).abs() <= tie_tol
        {
            end += 1;
        }
        order[start..end].sort_by_key(|&k| dominant_basis(k));
        start = end;
    }

    let mut eigenvalues = Vector6::zeros();
    let mut eigenvectors = Matrix6::from_element(c(0.0));
    for (slot, &k) in order.iter().enumerate() {
        eigenvalues[slot] = eig.eigenvalues[k];
        let col = eig.eigenvectors.column(k);
        // Phase convention: largest component real positive.
        let lead = col
            .iter()
            .max_by(|a, b| a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap())
            .copied()
            .unwrap();
        let phase = if lead.norm() > 0.0 {
            lead.conj() / c(lead.norm())
        } else {
            c(1.0)
        };
        for i in 0..DIM {
            eigenvectors[(i, slot)] = col[i] * phase;
        }
    }

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Electron branch of an ODMR transition: |0⟩ → |+1⟩ or |0⟩ → |−1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

/// The four m_I-preserving transition frequencies |0, m_I⟩ → |±1, m_I⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSet {
    /// ω_{+, +1/2}, Hz.
    pub plus_up: f64,
    /// ω_{+, −1/2}, Hz.
    pub plus_down: f64,
    /// ω_{−, +1/2}, Hz.
    pub minus_up: f64,
    /// ω_{−, −1/2}, Hz.
    pub minus_down: f64,
    /// Set when the input left the stated validity range of the formula.
    pub approximation_warning: bool,
}

impl TransitionSet {
    pub fn branch_mean(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => 0.5 * (self.plus_up + self.plus_down),
            Branch::Minus => 0.5 * (self.minus_up + self.minus_down),
        }
    }

    /// |ω_{b,+1/2} − ω_{b,−1/2}|; equals A_z under the secular formula.
    pub fn doublet_splitting(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => (self.plus_up - self.plus_down).abs(),
            Branch::Minus => (self.minus_up - self.minus_down).abs(),
        }
    }

    /// The four frequencies with their (branch, 2·m_I) labels.
    pub fn labeled(&self) -> [(Branch, i32, f64); 4] {
        [
            (Branch::Plus, 1, self.plus_up),
            (Branch::Plus, -1, self.plus_down),
            (Branch::Minus, 1, self.minus_up),
            (Branch::Minus, -1, self.minus_down),
        ]
    }

    /// Frequencies sorted ascending.
    pub fn sorted(&self) -> [f64; 4] {
        let mut f = [self.plus_up, self.plus_down, self.minus_up, self.minus_down];
        f.sort_by(|a, b| a.partial_cmp(b).unwrap());
        f
    }
}

/// Secular transition frequencies ω_{±, m_I} = D ± γ_e B_z ± m_I A_z.
///
/// Flags a warning above 10 mT where the small-field assumption
/// |B_z| ≪ D/γ_e starts to degrade.
pub fn secular_transitions(constants: &SpinConstants, b_z: f64) -> TransitionSet {
    let warn = b_z.abs() > 10e-3;
    let d = constants.d;
    let ez = constants.gamma_e * b_z;
    let half_az = 0.5 * constants.a_z;
    TransitionSet {
        plus_up: d + ez + half_az,
        plus_down: d + ez - half_az,
        minus_up: d - ez - half_az,
        minus_down: d - ez + half_az,
        approximation_warning: warn,
    }
}

/// m_I-preserving transition frequencies from exact diagonalization,
/// with eigenstates labeled by their dominant basis state.
pub fn exact_transitions(constants: &SpinConstants, field: &NvFrameField) -> Result<TransitionSet> {
    let eig = eigensystem(&build_hamiltonian(constants, field))?;
    let labels = eig.label_by_overlap();
    let e = |ms: i32, mi2: i32| eig.eigenvalues[labels[basis_index(ms, mi2)]];
    Ok(TransitionSet {
        plus_up: e(1, 1) - e(0, 1),
        plus_down: e(1, -1) - e(0, -1),
        minus_up: e(-1, 1) - e(0, 1),
        minus_down: e(-1, -1) - e(0, -1),
        approximation_warning: false,
    })
}

/// Nuclear oscillation frequency with its validity flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuclearOscillation {
    /// ω_NO/2π, Hz.
    pub frequency: f64,
    /// Set when B_⊥ is not small against A_z/|γ_I|.
    pub validity_warning: bool,
}

/// ω_NO = √((γ_I B_z)² + (γ_I,⊥ B_⊥)²), the oscillation frequency of the
/// nuclear spin inside the m_S = 0 manifold.
///
/// Valid for B_⊥ ≪ A_z/|γ_I|; outside that range the result carries a
/// warning flag rather than failing.
pub fn nuclear_oscillation_frequency(
    constants: &SpinConstants,
    b_z: f64,
    b_perp: f64,
) -> NuclearOscillation {
    debug_assert!(b_perp >= 0.0);
    let warn = b_perp > 0.1 * constants.a_z / constants.gamma_i.abs();
    let axial = constants.gamma_i * b_z;
    let transverse = constants.gamma_i_perp * b_perp;
    NuclearOscillation {
        frequency: axial.hypot(transverse),
        validity_warning: warn,
    }
}

/// Idealized nuclear-state-selective double-π-pulse sequence.
///
/// Starting from an equal mixture of |0, ±1/2⟩, the population of
/// |0, +1/2⟩ is swapped into |+1, +1/2⟩, the system evolves freely for
/// each delay, and the swap is applied again. Returned per delay is the
/// m_S = 0 population with the swapped-back (non-oscillating) half
/// subtracted, i.e. the population of the sublevel that was never
/// transferred: 1/2 at zero delay, oscillating at the m_S = 0 manifold
/// splitting, constant when B_⊥ = 0.
pub fn simulate_nutation_sequence(
    constants: &SpinConstants,
    field: &NvFrameField,
    delays: &[f64],
) -> Result<Vec<f64>> {
    if delays.iter().any(|&dt| !(dt >= 0.0)) {
        return Err(Error::validation("delays must be non-negative"));
    }
    let eig = eigensystem(&build_hamiltonian(constants, field))?;
    let v = eig.eigenvectors;
    let v_dag = v.adjoint();

    // Population swap |0,+1/2⟩ ↔ |+1,+1/2⟩ (basis indices 3 and 5).
    let swap = {
        let mut p = Matrix6::identity();
        p[(3, 3)] = c(0.0);
        p[(5, 5)] = c(0.0);
        p[(3, 5)] = c(1.0);
        p[(5, 3)] = c(1.0);
        p
    };

    // Initial mixture of |0, ±1/2⟩, already swapped once.
    let mut rho1 = Matrix6::from_element(c(0.0));
    rho1[(2, 2)] = c(0.5);
    rho1[(5, 5)] = c(0.5);

    let signal = delays
        .iter()
        .map(|&dt| {
            let mut phases = Matrix6::from_element(c(0.0));
            for k in 0..DIM {
                let angle = -2.0 * std::f64::consts::PI * eig.eigenvalues[k] * dt;
                phases[(k, k)] = C64::new(angle.cos(), angle.sin());
            }
            let u = v * phases * v_dag;
            let rho = u * rho1 * u.adjoint();
            let rho2 = swap * rho * swap.adjoint();
            let p0 = rho2[(2, 2)].re + rho2[(3, 3)].re;
            (p0 - 0.5).clamp(0.0, 1.0)
        })
        .collect();
    Ok(signal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Perturbative transverse-response slope |γ_I − 2 γ_e A_⊥ / D|,
    /// independent of the matrix construction.
    fn perturbative_gamma_i_perp(c: &SpinConstants) -> f64 {
        (c.gamma_i - 2.0 * c.gamma_e * c.a_perp / c.d).abs()
    }

    #[test]
    fn basis_indexing_is_consistent() {
        for i in 0..DIM {
            assert_eq!(basis_index(MS_OF_INDEX[i], MI2_OF_INDEX[i]), i);
        }
    }

    #[test]
    fn default_constants_match_documented_values() {
        let c = SpinConstants::default();
        assert_eq!(c.d, 2.87e9);
        assert_eq!(c.gamma_e, 28.0e9);
        assert_eq!(c.gamma_i, -4.3e6);
        assert_eq!(c.a_z, 3.03e6);
        assert_eq!(c.a_perp, 3.65e6);
        assert_eq!(c.gamma_i_perp, 75.0e6);
        c.validate().unwrap();
    }

    #[test]
    fn hamiltonian_is_hermitian_at_sample_fields() {
        let c = SpinConstants::default();
        for field in [
            NvFrameField::new(0.0, 0.0, 0.0),
            NvFrameField::new(1e-3, 0.0, 0.0),
            NvFrameField::new(3e-4, -7e-4, 2e-4),
        ] {
            let h = build_hamiltonian(&c, &field);
            assert!(h.is_hermitian(), "defect {}", h.hermiticity_defect());
        }
    }

    #[test]
    fn zero_field_spectrum() {
        let c = SpinConstants::default();
        let eig = eigensystem(&build_hamiltonian(&c, &NvFrameField::default())).unwrap();
        // m_S = 0 doublet stays degenerate (equal second-order shifts).
        assert!((eig.eigenvalues[1] - eig.eigenvalues[0]).abs() < 1.0);
        // Gaps to the four upper levels follow the D ± A_z/2 pattern up to
        // the non-secular correction of scale A_perp²/D.
        let correction = c.a_perp * c.a_perp / c.d;
        let e0 = 0.5 * (eig.eigenvalues[0] + eig.eigenvalues[1]);
        let mut gaps: Vec<f64> = (2..DIM).map(|k| eig.eigenvalues[k] - e0).collect();
        gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (gap, expected) in gaps.iter().zip([
            c.d - 0.5 * c.a_z,
            c.d - 0.5 * c.a_z,
            c.d + 0.5 * c.a_z,
            c.d + 0.5 * c.a_z,
        ]) {
            assert!(
                (gap - expected).abs() < 3.0 * correction,
                "gap {gap} vs {expected}"
            );
        }
    }

    #[test]
    fn zero_field_spectrum_is_exact_without_nonsecular_term() {
        let c = SpinConstants {
            a_perp: 0.0,
            ..SpinConstants::default()
        };
        let h = build_hamiltonian(&c, &NvFrameField::default());
        let eig = eigensystem(&h).unwrap();
        let expected = [
            0.0,
            0.0,
            c.d - 0.5 * c.a_z,
            c.d - 0.5 * c.a_z,
            c.d + 0.5 * c.a_z,
            c.d + 0.5 * c.a_z,
        ];
        for (got, want) in eig.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-5, "{got} vs {want}");
        }
    }

    #[test]
    fn axial_field_transitions_match_secular_formula() {
        let c = SpinConstants::default();
        let b_z = 1e-3;
        let exact = exact_transitions(&c, &NvFrameField::axial(b_z)).unwrap();
        let secular = secular_transitions(&c, b_z);
        // |0,m⟩ → |+1,m⟩ sits at D + γ_e·10⁻³ ± A_z/2 ≈ 2.898 GHz ± 1.515 MHz.
        assert_relative_eq!(secular.plus_up, 2.898e9 + 1.515e6, max_relative = 1e-12);
        assert_relative_eq!(secular.plus_down, 2.898e9 - 1.515e6, max_relative = 1e-12);
        // Exact transitions deviate only by the A_perp²/D-scale correction.
        let correction = c.a_perp * c.a_perp / c.d;
        for (e, s) in exact.sorted().iter().zip(secular.sorted()) {
            assert!((e - s).abs() <= 1.2 * correction, "exact {e} secular {s}");
        }
    }

    #[test]
    fn axial_field_transitions_exact_when_nonsecular_dropped() {
        let c = SpinConstants {
            a_perp: 0.0,
            ..SpinConstants::default()
        };
        for b_z in [-2e-3, -0.5e-3, 0.3e-3, 2e-3] {
            let exact = exact_transitions(&c, &NvFrameField::axial(b_z)).unwrap();
            let secular = secular_transitions(&c, b_z);
            for (e, s) in exact.sorted().iter().zip(secular.sorted()) {
                assert!((e - s).abs() < 10.0, "b_z {b_z}: {e} vs {s}");
            }
        }
    }

    #[test]
    fn transverse_field_splits_ms0_manifold_at_enhanced_rate() {
        let c = SpinConstants::default();
        let b = 1e-3;
        let eig = eigensystem(&build_hamiltonian(&c, &NvFrameField::new(b, 0.0, 0.0))).unwrap();
        let splitting = eig.ms0_splitting();
        // ≈ 75 kHz at 1 mT, validating the quoted gamma_i_perp.
        assert_relative_eq!(splitting, c.gamma_i_perp * b, max_relative = 0.05);
        // and matches second-order perturbation theory tightly.
        assert_relative_eq!(splitting, perturbative_gamma_i_perp(&c) * b, max_relative = 0.01);
    }

    #[test]
    fn secular_transitions_at_zero_field_form_coincident_doublet() {
        let c = SpinConstants::default();
        let t = secular_transitions(&c, 0.0);
        assert_eq!(t.plus_up, t.minus_down);
        assert_eq!(t.plus_down, t.minus_up);
        assert_relative_eq!(t.plus_up, c.d + 0.5 * c.a_z);
        assert_relative_eq!(t.plus_down, c.d - 0.5 * c.a_z);
        assert!(!t.approximation_warning);
    }

    #[test]
    fn secular_transitions_resolved_quadruplet_at_fig3_current_scale() {
        let c = SpinConstants::default();
        // 240 µA × 1.4 T/A ≈ 0.336 mT
        let b_z = 0.336e-3;
        let t = secular_transitions(&c, b_z);
        let branch_sep = t.branch_mean(Branch::Plus) - t.branch_mean(Branch::Minus);
        assert_relative_eq!(branch_sep, 2.0 * c.gamma_e * b_z, max_relative = 1e-12);
        assert!((branch_sep - 18.8e6).abs() < 0.1e6);
        assert_relative_eq!(t.doublet_splitting(Branch::Plus), c.a_z);
        assert_relative_eq!(t.doublet_splitting(Branch::Minus), c.a_z);
        // ordering invariant for B_z > 0
        assert!(t.plus_up > t.minus_up && t.plus_down > t.minus_down);
    }

    #[test]
    fn secular_inversion_round_trip() {
        let c = SpinConstants::default();
        for b_z in [1e-5, 3.36e-4, 1.7e-3] {
            let t = secular_transitions(&c, b_z);
            let recovered =
                (t.branch_mean(Branch::Plus) - t.branch_mean(Branch::Minus)) / (2.0 * c.gamma_e);
            assert_relative_eq!(recovered, b_z, max_relative = 1e-12);
        }
    }

    #[test]
    fn secular_warning_above_ten_millitesla() {
        let c = SpinConstants::default();
        assert!(secular_transitions(&c, 11e-3).approximation_warning);
        assert!(!secular_transitions(&c, 9e-3).approximation_warning);
    }

    #[test]
    fn eigensystem_of_diagonal_hamiltonian() {
        let c = SpinConstants {
            gamma_e: 0.0,
            gamma_i: -1e-9, // validate() demands negative; effectively zero
            a_z: 0.0,
            a_perp: 0.0,
            ..SpinConstants::default()
        };
        // D S_z² only: eigenvalues {0, 0, D, D, D, D}.
        let eig = eigensystem(&build_hamiltonian(&c, &NvFrameField::default())).unwrap();
        assert!(eig.eigenvalues[0].abs() < 1e-3 && eig.eigenvalues[1].abs() < 1e-3);
        for k in 2..DIM {
            assert_relative_eq!(eig.eigenvalues[k], c.d, max_relative = 1e-12);
        }
    }

    #[test]
    fn eigensystem_rejects_non_hermitian_input() {
        let mut m = Matrix6::from_element(c(0.0));
        m[(0, 1)] = c(1.0e9);
        let err = eigensystem(&SpinMatrix::from_matrix(m)).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn eigensystem_reconstructs_random_hermitian_matrix() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let mut m = Matrix6::from_element(c(0.0));
            for i in 0..DIM {
                for j in i..DIM {
                    let re: f64 = rng.gen_range(-1.0..1.0);
                    let im: f64 = if i == j { 0.0 } else { rng.gen_range(-1.0..1.0) };
                    m[(i, j)] = C64::new(re, im);
                    m[(j, i)] = C64::new(re, -im);
                }
            }
            let sm = SpinMatrix::from_matrix(m);
            let eig = eigensystem(&sm).unwrap();
            let mut lambda = Matrix6::from_element(c(0.0));
            for k in 0..DIM {
                lambda[(k, k)] = c(eig.eigenvalues[k]);
            }
            let rebuilt = eig.eigenvectors * lambda * eig.eigenvectors.adjoint();
            let defect = (rebuilt - m).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(defect < 1e-9 * sm.max_entry().max(1.0) * 10.0, "defect {defect}");
            // ascending order
            for k in 1..DIM {
                assert!(eig.eigenvalues[k] >= eig.eigenvalues[k - 1]);
            }
        }
    }

    #[test]
    fn eigenvector_residuals_are_small() {
        let constants = SpinConstants::default();
        let h = build_hamiltonian(&constants, &NvFrameField::new(4e-4, 2e-4, 9e-4));
        let eig = eigensystem(&h).unwrap();
        for k in 0..DIM {
            let v = eig.eigenvectors.column(k);
            let hv = h.matrix() * v;
            let res = (hv - v * c(eig.eigenvalues[k])).norm();
            assert!(res < 1e-6 * h.max_entry(), "residual {res}");
        }
    }

    #[test]
    fn nuclear_oscillation_limits() {
        let c = SpinConstants::default();
        let axial = nuclear_oscillation_frequency(&c, 1e-3, 0.0);
        assert_relative_eq!(axial.frequency, 4.3e3, max_relative = 1e-12);
        assert!(!axial.validity_warning);
        let transverse = nuclear_oscillation_frequency(&c, 0.0, 1e-3);
        assert_relative_eq!(transverse.frequency, 75e3, max_relative = 1e-12);
        let huge = nuclear_oscillation_frequency(&c, 0.0, 0.2);
        assert!(huge.validity_warning);
    }

    #[test]
    fn nuclear_oscillation_matches_exact_ms0_splitting() {
        let c = SpinConstants::default();
        for (b_z, b_perp) in [(0.3e-3, 0.5e-3), (1e-3, 1e-3), (0.7e-3, 0.2e-3)] {
            let formula = nuclear_oscillation_frequency(&c, b_z, b_perp).frequency;
            let eig =
                eigensystem(&build_hamiltonian(&c, &NvFrameField::new(b_perp, 0.0, b_z))).unwrap();
            let exact = eig.ms0_splitting();
            assert_relative_eq!(formula, exact, max_relative = 0.05);
        }
    }

    #[test]
    fn sx_elements_follow_spin1_algebra() {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(sx_matrix_element(), inv_sqrt2, max_relative = 1e-15);
        assert_relative_eq!(sx_element(0, 1), inv_sqrt2, max_relative = 1e-15);
        assert_eq!(sx_element(-1, 1), 0.0);
    }

    #[test]
    fn nutation_sequence_at_zero_delay_gives_half() {
        let c = SpinConstants::default();
        let field = NvFrameField::new(0.5e-3, 0.0, 0.3e-3);
        let signal = simulate_nutation_sequence(&c, &field, &[0.0]).unwrap();
        assert_relative_eq!(signal[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn nutation_sequence_is_constant_without_transverse_field() {
        let c = SpinConstants::default();
        let field = NvFrameField::axial(0.4e-3);
        let delays: Vec<f64> = (0..200).map(|k| k as f64 * 1e-6).collect();
        let signal = simulate_nutation_sequence(&c, &field, &delays).unwrap();
        let (min, max) = signal
            .iter()
            .fold((1.0f64, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
        assert!(max - min < 1e-5, "variation {}", max - min);
        assert_relative_eq!(signal[0], 0.5, epsilon = 1e-9);
    }

    #[test]
    fn nutation_sequence_oscillates_at_manifold_splitting() {
        let c = SpinConstants::default();
        // Fields of a 240 µA drive through the measured ratios; a finite
        // B_z keeps the parked |+1,+1/2⟩ state Zeeman-protected, as in the
        // experiment (at B_z = 0 the degenerate m_S = ±1 manifold mixes).
        let field = NvFrameField::new(0.456e-3, 0.0, 0.336e-3);
        let eig = eigensystem(&build_hamiltonian(&c, &field)).unwrap();
        let f = eig.ms0_splitting();
        let signal =
            simulate_nutation_sequence(&c, &field, &[0.5 / f, 1.0 / f, 1.5 / f]).unwrap();
        assert!(signal[0] < 0.02, "half period {}", signal[0]);
        assert!((signal[1] - 0.5).abs() < 5e-3, "full period {}", signal[1]);
        assert!(signal[2] < 0.02, "three half periods {}", signal[2]);
    }

    #[test]
    fn nutation_sequence_bounded_and_periodic() {
        let c = SpinConstants::default();
        let field = NvFrameField::new(0.4e-3, 0.3e-3, 0.2e-3);
        let f = nuclear_oscillation_frequency(&c, 0.2e-3, 0.5e-3).frequency;
        let delays: Vec<f64> = (0..400).map(|k| k as f64 * 0.01 / f).collect();
        let signal = simulate_nutation_sequence(&c, &field, &delays).unwrap();
        assert!(signal.iter().all(|&s| (0.0..=1.0).contains(&s)));
    }

    #[test]
    fn nutation_sequence_invariant_under_transverse_rotation() {
        let c = SpinConstants::default();
        let delays: Vec<f64> = (0..50).map(|k| k as f64 * 2e-6).collect();
        let a = simulate_nutation_sequence(&c, &NvFrameField::new(6e-4, 0.0, 2e-4), &delays)
            .unwrap();
        let b = simulate_nutation_sequence(&c, &NvFrameField::new(0.0, 6e-4, 2e-4), &delays)
            .unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn nutation_sequence_rejects_negative_delay() {
        let c = SpinConstants::default();
        let err =
            simulate_nutation_sequence(&c, &NvFrameField::default(), &[-1e-6]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }
}
