//! Truncated Fock-space operators, the two Pauli-operator families, and
//! their embedding into the composite TLS (x) field space.
//!
//! Two bases coexist for the two-level system:
//!
//! * the energy basis, ordered `(|A>, |S>)` — operators named `sigma_*`;
//! * the site basis, ordered `(|R>, |L>)` — operators named `rho_*`.
//!
//! The bases are related by `|R> = (|S> + |A>)/sqrt(2)`,
//! `|L> = (|S> - |A>)/sqrt(2)`, under which `rho_z = sigma_x`,
//! `rho_x = -sigma_z` and `rho_y = sigma_y` as matrix identities.
//!
//! Composite operators are ordered TLS first: `embed(T, F) = T (x) F`.
//! Multimode field factors ascend by mode index.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numal::{kron, ComplexMatrix};

/// Bosonic mode truncated to the lowest `n_max` Fock states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockSpace {
    n_max: usize,
}

impl FockSpace {
    /// At least two Fock states are required.
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::invalid(
                "Fock truncation",
                format!("need at least 2 retained states, got {n_max}"),
            ));
        }
        Ok(Self { n_max })
    }

    pub fn dim(&self) -> usize {
        self.n_max
    }

    /// Same mode with doubled truncation.
    pub fn doubled(&self) -> Self {
        Self {
            n_max: self.n_max * 2,
        }
    }
}

/// Annihilation operator: `a[n-1, n] = sqrt(n)`.
pub fn annihilation(f: FockSpace) -> ComplexMatrix {
    let n = f.dim();
    let mut a = ComplexMatrix::zeros(n);
    for k in 1..n {
        a.set(k - 1, k, Complex64::new((k as f64).sqrt(), 0.0));
    }
    a
}

/// Creation operator `a^dag`.
pub fn creation(f: FockSpace) -> ComplexMatrix {
    annihilation(f).adjoint()
}

/// Number operator `a^dag a = diag(0, 1, ..., N-1)`.
pub fn number(f: FockSpace) -> ComplexMatrix {
    let entries: Vec<f64> = (0..f.dim()).map(|n| n as f64).collect();
    ComplexMatrix::diag_real(&entries)
}

/// Field quadrature `a + a^dag`.
pub fn quadrature_x(f: FockSpace) -> ComplexMatrix {
    let a = annihilation(f);
    a.add(&a.adjoint())
}

/// Conjugate quadrature `i (a - a^dag)` (Hermitian).
pub fn quadrature_p(f: FockSpace) -> ComplexMatrix {
    let a = annihilation(f);
    a.sub(&a.adjoint()).scale(Complex64::new(0.0, 1.0))
}

/// Which two-level basis an operator is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PauliFamily {
    /// Energy basis `(|A>, |S>)`.
    Sigma,
    /// Site basis `(|R>, |L>)`.
    Rho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorLabel {
    pub family: PauliFamily,
    pub axis: PauliAxis,
}

/// Pauli operator in its family's own ordered basis.
///
/// `pauli(sigma, z) = diag(1, -1)` in `(|A>, |S>)` ordering, and likewise
/// `pauli(rho, z) = diag(1, -1)` in `(|R>, |L>)` ordering; the numeric
/// matrices per axis coincide across families, the label tracks which
/// basis they act in.
pub fn pauli(label: OperatorLabel) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    match label.axis {
        PauliAxis::X => {
            m.set(0, 1, Complex64::new(1.0, 0.0));
            m.set(1, 0, Complex64::new(1.0, 0.0));
        }
        PauliAxis::Y => {
            m.set(0, 1, Complex64::new(0.0, -1.0));
            m.set(1, 0, Complex64::new(0.0, 1.0));
        }
        PauliAxis::Z => {
            m.set(0, 0, Complex64::new(1.0, 0.0));
            m.set(1, 1, Complex64::new(-1.0, 0.0));
        }
    }
    m
}

pub fn sigma_x() -> ComplexMatrix {
    pauli(OperatorLabel { family: PauliFamily::Sigma, axis: PauliAxis::X })
}

pub fn sigma_y() -> ComplexMatrix {
    pauli(OperatorLabel { family: PauliFamily::Sigma, axis: PauliAxis::Y })
}

pub fn sigma_z() -> ComplexMatrix {
    pauli(OperatorLabel { family: PauliFamily::Sigma, axis: PauliAxis::Z })
}

pub fn rho_x() -> ComplexMatrix {
    pauli(OperatorLabel { family: PauliFamily::Rho, axis: PauliAxis::X })
}

pub fn rho_y() -> ComplexMatrix {
    pauli(OperatorLabel { family: PauliFamily::Rho, axis: PauliAxis::Y })
}

pub fn rho_z() -> ComplexMatrix {
    pauli(OperatorLabel { family: PauliFamily::Rho, axis: PauliAxis::Z })
}

/// Change of basis from site coordinates `(c_R, c_L)` to energy
/// coordinates `(c_A, c_S)`: columns are `|R>` and `|L>` expressed in the
/// `(|A>, |S>)` basis.
pub fn site_to_energy_basis() -> ComplexMatrix {
    let s = 1.0 / 2.0f64.sqrt();
    let mut b = ComplexMatrix::zeros(2);
    b.set(0, 0, Complex64::new(s, 0.0));
    b.set(0, 1, Complex64::new(-s, 0.0));
    b.set(1, 0, Complex64::new(s, 0.0));
    b.set(1, 1, Complex64::new(s, 0.0));
    b
}

/// Express a rho-family operator in the energy basis: `B M B^dag`.
pub fn rho_in_energy_basis(m: &ComplexMatrix) -> ComplexMatrix {
    let b = site_to_energy_basis();
    b.matmul(m).matmul(&b.adjoint())
}

/// `tls_op (x) field_op`, TLS factor first.
pub fn embed(tls_op: &ComplexMatrix, field_op: &ComplexMatrix) -> Result<ComplexMatrix> {
    assert_eq!(tls_op.dim(), 2, "TLS operator must be 2x2");
    kron(tls_op, field_op)
}
