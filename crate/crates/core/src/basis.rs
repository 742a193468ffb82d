//! The truncated product basis.
//!
//! Total excitation number is conserved by the Hamiltonian and lowered by
//! every decay channel, so starting from one excitation the dynamics never
//! leaves the span of nine one-excitation states plus two zero-excitation
//! sinks. Canonical order (0-based position, CSV label):
//!
//! | pos | label | state |
//! |-----|-------|-------|
//! | 0 | `d1` | `|e>_A |0>_A |0>_f |0>_B |g>_B` |
//! | 1 | `d2` | `|g-1>_A |1-1>_A |0>_f |0>_B |g>_B` |
//! | 2 | `d3` | `|g-1>_A |0>_A |1-1>_f |0>_B |g>_B` |
//! | 3 | `d4` | `|g-1>_A |0>_A |0>_f |1-1>_B |g>_B` |
//! | 4 | `d5` | `|g-1>_A |0>_A |0>_f |0>_B |e-1>_B` |
//! | 5 | `d6` | `|g+1>_A |1+1>_A |0>_f |0>_B |g>_B` |
//! | 6 | `d7` | `|g+1>_A |0>_A |1+1>_f |0>_B |g>_B` |
//! | 7 | `d8` | `|g+1>_A |0>_A |0>_f |1+1>_B |g>_B` |
//! | 8 | `d9` | `|g+1>_A |0>_A |0>_f |0>_B |e+1>_B` |
//! | 9 | `s10` | `|g-1>_A |0>_A |0>_f |0>_B |g>_B` |
//! | 10 | `s11` | `|g+1>_A |0>_A |0>_f |0>_B |g>_B` |

use std::fmt;

/// Dimension of the truncated space.
pub const DIM: usize = 11;

/// Circular polarization label `j = -1, +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    Minus,
    Plus,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::Minus, Polarization::Plus];

    pub fn sign(self) -> i8 {
        match self {
            Polarization::Minus => -1,
            Polarization::Plus => 1,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Polarization::Minus => "-1",
            Polarization::Plus => "+1",
        }
    }
}

/// Λ-type atom A: one excited level, two ground sublevels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomA {
    Excited,
    Ground(Polarization),
}

/// V-type atom B: one ground level, two excited sublevels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomB {
    Ground,
    Excited(Polarization),
}

/// A field mode truncated at one photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Vacuum,
    Photon(Polarization),
}

impl AtomA {
    pub const ALL: [AtomA; 3] = [
        AtomA::Excited,
        AtomA::Ground(Polarization::Minus),
        AtomA::Ground(Polarization::Plus),
    ];
}

impl AtomB {
    pub const ALL: [AtomB; 3] = [
        AtomB::Ground,
        AtomB::Excited(Polarization::Minus),
        AtomB::Excited(Polarization::Plus),
    ];
}

impl Mode {
    pub const ALL: [Mode; 3] = [
        Mode::Vacuum,
        Mode::Photon(Polarization::Minus),
        Mode::Photon(Polarization::Plus),
    ];

    fn quanta(self) -> u32 {
        match self {
            Mode::Vacuum => 0,
            Mode::Photon(_) => 1,
        }
    }

    fn polarization(self) -> Option<Polarization> {
        match self {
            Mode::Vacuum => None,
            Mode::Photon(p) => Some(p),
        }
    }
}

/// Product state of atom A, cavity A, fibre, cavity B, atom B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub atom_a: AtomA,
    pub cavity_a: Mode,
    pub fibre: Mode,
    pub cavity_b: Mode,
    pub atom_b: AtomB,
}

impl BasisState {
    const fn new(atom_a: AtomA, cavity_a: Mode, fibre: Mode, cavity_b: Mode, atom_b: AtomB) -> Self {
        BasisState {
            atom_a,
            cavity_a,
            fibre,
            cavity_b,
            atom_b,
        }
    }

    /// Excitation number: atomic excitations plus photons.
    pub fn excitation_number(&self) -> u32 {
        let a = u32::from(self.atom_a == AtomA::Excited);
        let b = u32::from(self.atom_b != AtomB::Ground);
        a + self.cavity_a.quanta() + self.fibre.quanta() + self.cavity_b.quanta() + b
    }

    /// True if the state belongs to the truncated space: at most one
    /// excitation, and every photon or B-excitation carries the same
    /// polarization label as atom A's ground sublevel.
    pub fn is_valid(&self) -> bool {
        if self.excitation_number() > 1 {
            return false;
        }
        let ground = match self.atom_a {
            // excited A already holds the only excitation
            AtomA::Excited => return true,
            AtomA::Ground(p) => p,
        };
        let b = match self.atom_b {
            AtomB::Ground => None,
            AtomB::Excited(p) => Some(p),
        };
        [
            self.cavity_a.polarization(),
            self.fibre.polarization(),
            self.cavity_b.polarization(),
            b,
        ]
        .into_iter()
        .flatten()
        .all(|p| p == ground)
    }

    /// 0-based position in the canonical order, `None` if outside the space.
    pub fn position(&self) -> Option<usize> {
        CANONICAL.iter().position(|s| s == self)
    }

    /// Inverse of [`BasisState::position`].
    pub fn from_position(pos: usize) -> Option<BasisState> {
        CANONICAL.get(pos).copied()
    }

    /// CSV column label: `d1`..`d9`, `s10`, `s11`.
    pub fn label(&self) -> &'static str {
        self.position().map_or("?", |p| LABELS[p])
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = |m: Mode| match m {
            Mode::Vacuum => "0".to_string(),
            Mode::Photon(p) => format!("1{}", p.suffix()),
        };
        let a = match self.atom_a {
            AtomA::Excited => "e".to_string(),
            AtomA::Ground(p) => format!("g{}", p.suffix()),
        };
        let b = match self.atom_b {
            AtomB::Ground => "g".to_string(),
            AtomB::Excited(p) => format!("e{}", p.suffix()),
        };
        write!(
            f,
            "|{}>_A|{}>_A|{}>_f|{}>_B|{}>_B",
            a,
            mode(self.cavity_a),
            mode(self.fibre),
            mode(self.cavity_b),
            b
        )
    }
}

use AtomA as A;
use AtomB as B;
use Mode::{Photon, Vacuum};
use Polarization::{Minus, Plus};

const CANONICAL: [BasisState; DIM] = [
    BasisState::new(A::Excited, Vacuum, Vacuum, Vacuum, B::Ground),
    BasisState::new(A::Ground(Minus), Photon(Minus), Vacuum, Vacuum, B::Ground),
    BasisState::new(A::Ground(Minus), Vacuum, Photon(Minus), Vacuum, B::Ground),
    BasisState::new(A::Ground(Minus), Vacuum, Vacuum, Photon(Minus), B::Ground),
    BasisState::new(A::Ground(Minus), Vacuum, Vacuum, Vacuum, B::Excited(Minus)),
    BasisState::new(A::Ground(Plus), Photon(Plus), Vacuum, Vacuum, B::Ground),
    BasisState::new(A::Ground(Plus), Vacuum, Photon(Plus), Vacuum, B::Ground),
    BasisState::new(A::Ground(Plus), Vacuum, Vacuum, Photon(Plus), B::Ground),
    BasisState::new(A::Ground(Plus), Vacuum, Vacuum, Vacuum, B::Excited(Plus)),
    BasisState::new(A::Ground(Minus), Vacuum, Vacuum, Vacuum, B::Ground),
    BasisState::new(A::Ground(Plus), Vacuum, Vacuum, Vacuum, B::Ground),
];

/// CSV labels in canonical order.
pub const LABELS: [&str; DIM] = ["d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9", "s10", "s11"];

/// Named positions for the states the dynamics refers to directly.
pub mod pos {
    pub const EXCITED_A: usize = 0;
    /// First state of each polarization chain: cavity A photon.
    pub const CAVITY_A: [usize; 2] = [1, 5];
    pub const FIBRE: [usize; 2] = [2, 6];
    pub const CAVITY_B: [usize; 2] = [3, 7];
    pub const EXCITED_B: [usize; 2] = [4, 8];
    pub const SINK: [usize; 2] = [9, 10];
}

/// Slot of a polarization in the `pos` arrays.
pub fn chain(p: Polarization) -> usize {
    match p {
        Polarization::Minus => 0,
        Polarization::Plus => 1,
    }
}

/// The 11 basis states in canonical order.
pub fn enumerate_basis() -> [BasisState; DIM] {
    CANONICAL
}

/// Excitation number of a basis state.
pub fn excitation_number(state: &BasisState) -> u32 {
    state.excitation_number()
}

/// Dimension of the normal-mode effective model.
pub const EFFECTIVE_DIM: usize = 5;

/// Labels of the effective basis: `|e,0_c,g>`, `|g-1,1_c,-1,g>`,
/// `|g+1,1_c,+1,g>`, `|g-1,0_c,e-1>`, `|g+1,0_c,e+1>`.
pub const EFFECTIVE_LABELS: [&str; EFFECTIVE_DIM] = ["dt1", "dt2", "dt3", "dt4", "dt5"];
