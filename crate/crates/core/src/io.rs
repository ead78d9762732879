//! JSON formats for algebras, modules and maps.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraRef};
use crate::error::EngineError;
use crate::matrix::Matrix;
use crate::module::{Module, ModuleMap};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: String,
    pub dim: usize,
    pub unit: Vec<Scalar>,
    /// structure[i][j][k] = coefficient of b_k in b_i * b_j
    pub structure: Vec<Vec<Vec<Scalar>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl AlgebraJson {
    pub fn from_algebra(a: &Algebra) -> Self {
        let d = a.dim();
        let structure = (0..d)
            .map(|i| (0..d).map(|j| a.basis_product(i, j)).collect())
            .collect();
        AlgebraJson {
            field: a.field().to_string(),
            dim: d,
            unit: a.unit().to_vec(),
            structure,
            labels: a.labels().map(<[String]>::to_vec),
        }
    }

    pub fn into_algebra(self) -> Result<Algebra, EngineError> {
        let field: Field = self.field.parse()?;
        if self.structure.len() != self.dim {
            return Err(EngineError::Parse(format!(
                "structure tensor has {} slices, dim says {}",
                self.structure.len(),
                self.dim
            )));
        }
        for (i, slice) in self.structure.iter().enumerate() {
            if slice.len() != self.dim || slice.iter().any(|r| r.len() != self.dim) {
                return Err(EngineError::Parse(format!(
                    "structure slice {i} is not {0} x {0}",
                    self.dim
                )));
            }
        }
        if self.unit.len() != self.dim {
            return Err(EngineError::Parse("unit vector has the wrong length".into()));
        }
        for s in self.structure.iter().flatten().flatten().chain(self.unit.iter()) {
            if s.field() != field {
                return Err(EngineError::Parse(
                    "scalar entries do not match the declared field".into(),
                ));
            }
        }
        Ok(Algebra::from_tensor(field, &self.structure, self.unit, self.labels))
    }
}

pub fn algebra_to_json(a: &Algebra) -> serde_json::Value {
    serde_json::to_value(AlgebraJson::from_algebra(a)).expect("algebra serializes")
}

pub fn algebra_from_json_str(s: &str) -> Result<Algebra, EngineError> {
    let j: AlgebraJson = serde_json::from_str(s)?;
    j.into_algebra()
}

fn matrix_to_rows(m: &Matrix) -> Vec<Vec<Scalar>> {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

fn matrix_from_rows(
    field: Field,
    rows: &[Vec<Scalar>],
    expect: (usize, usize),
) -> Result<Matrix, EngineError> {
    if rows.len() != expect.0 || rows.iter().any(|r| r.len() != expect.1) {
        return Err(EngineError::Parse(format!(
            "matrix is not {} x {}",
            expect.0, expect.1
        )));
    }
    for s in rows.iter().flatten() {
        if s.field() != field {
            return Err(EngineError::Parse("matrix entry in the wrong field".into()));
        }
    }
    Ok(Matrix::from_rows(field, rows.to_vec()))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModuleJson {
    pub algebra: AlgebraJson,
    pub dim: usize,
    /// one dim x dim action matrix per algebra basis element
    pub actions: Vec<Vec<Vec<Scalar>>>,
}

impl ModuleJson {
    pub fn from_module(m: &Module) -> Self {
        ModuleJson {
            algebra: AlgebraJson::from_algebra(m.algebra()),
            dim: m.dim(),
            actions: m.actions().iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn into_module(self) -> Result<Module, EngineError> {
        let ModuleJson {
            algebra,
            dim,
            actions,
        } = self;
        let algebra = Arc::new(algebra.into_algebra()?);
        ModuleJson {
            algebra: AlgebraJson::from_algebra(&algebra),
            dim,
            actions,
        }
        .into_module_over(&algebra)
    }

    pub fn into_module_over(self, algebra: &AlgebraRef) -> Result<Module, EngineError> {
        if self.actions.len() != algebra.dim() {
            return Err(EngineError::Parse(format!(
                "{} action matrices for an algebra of dimension {}",
                self.actions.len(),
                algebra.dim()
            )));
        }
        let actions = self
            .actions
            .iter()
            .map(|rows| matrix_from_rows(algebra.field(), rows, (self.dim, self.dim)))
            .collect::<Result<Vec<_>, _>>()?;
        let m = Module::new(Arc::clone(algebra), actions);
        if !m.verify_module_law() {
            return Err(EngineError::Parse(
                "action matrices violate the module law".into(),
            ));
        }
        Ok(m)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub source: ModuleJson,
    pub target: ModuleJson,
    pub matrix: Vec<Vec<Scalar>>,
}

impl MapJson {
    pub fn from_map(f: &ModuleMap) -> Self {
        MapJson {
            source: ModuleJson::from_module(&f.source),
            target: ModuleJson::from_module(&f.target),
            matrix: matrix_to_rows(&f.matrix),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn algebra_round_trip() {
        let a = families::liu_schulz(Field::Q, &Scalar::from_int(Field::Q, 2)).unwrap();
        let s = serde_json::to_string(&AlgebraJson::from_algebra(&a)).unwrap();
        let b = algebra_from_json_str(&s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn module_round_trip() {
        let a = families::liu_schulz_ref(Field::Q, &Scalar::from_int(Field::Q, 2)).unwrap();
        let m = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        let s = serde_json::to_string(&ModuleJson::from_module(&m)).unwrap();
        let j: ModuleJson = serde_json::from_str(&s).unwrap();
        let m2 = j.into_module().unwrap();
        assert_eq!(m.dim(), m2.dim());
        assert_eq!(m.actions(), m2.actions());
    }

    #[test]
    fn corrupted_tensor_rejected_by_check() {
        let a = families::quantum_exterior_2(Field::Q, &Scalar::from_int(Field::Q, 2)).unwrap();
        let mut j = AlgebraJson::from_algebra(&a);
        j.structure[1][1][0] = Scalar::one(Field::Q); // x*x = 1
        let b = j.into_algebra().unwrap();
        assert!(b.check().is_err());
    }
}
