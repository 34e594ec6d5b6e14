use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{FieldSpec, VecError};

/// A vector with finite support over a prime field, stored densely from
/// index 0. Canonical form: every entry is a residue in `0..p` and the last
/// entry is nonzero (the zero vector has no entries), so structural equality
/// is vector equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    field: FieldSpec,
    coeffs: Vec<u64>,
}

impl Vector {
    pub fn zero(field: FieldSpec) -> Self {
        Vector {
            field,
            coeffs: Vec::new(),
        }
    }

    /// The standard basis vector e_i.
    pub fn basis(field: FieldSpec, i: usize) -> Self {
        let mut coeffs = vec![0; i + 1];
        coeffs[i] = 1;
        Vector { field, coeffs }
    }

    /// Builds a vector from dense coefficients, reducing mod p and trimming
    /// trailing zeros.
    pub fn from_coeffs(field: FieldSpec, coeffs: impl Into<Vec<u64>>) -> Self {
        let mut coeffs = coeffs.into();
        for c in &mut coeffs {
            *c = field.reduce(*c);
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Vector { field, coeffs }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient at index `i`; zero beyond the stored range.
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Indices with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn min_support(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn max_support(&self) -> Option<usize> {
        // Canonical form: the last stored entry is nonzero.
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Vector) -> Result<Vector, VecError> {
        self.add_scaled(1, other)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector, VecError> {
        self.add_scaled(self.field.p() - 1, other)
    }

    pub fn scaled(&self, c: u64) -> Vector {
        let c = self.field.reduce(c);
        Vector::from_coeffs(
            self.field,
            self.coeffs
                .iter()
                .map(|&a| self.field.mul(a, c))
                .collect::<Vec<_>>(),
        )
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: u64, other: &Vector) -> Result<Vector, VecError> {
        if self.field != other.field {
            return Err(VecError::FieldMismatch);
        }
        let f = self.field;
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < other.coeffs.len() {
            coeffs.resize(other.coeffs.len(), 0);
        }
        for (i, &b) in other.coeffs.iter().enumerate() {
            coeffs[i] = f.add(coeffs[i], f.mul(c, b));
        }
        Ok(Vector::from_coeffs(f, coeffs))
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "e{i}")?;
            } else {
                write!(f, "{c}e{i}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    p: u64,
    coeffs: Vec<u64>,
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        VectorRepr {
            p: self.field.p(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = VectorRepr::deserialize(deserializer)?;
        let field = FieldSpec::new(repr.p).map_err(D::Error::custom)?;
        Ok(Vector::from_coeffs(field, repr.coeffs))
    }
}
