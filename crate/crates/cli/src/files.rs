//! On-disk input formats: the JSON system file shared by `qinv`, `solve`,
//! `hk`, and `bezout`, and the one-operator-per-line plain format accepted
//! by `eval` and `mul`.

use std::path::Path;

use serde::Deserialize;

use weylq_core::scalar::parse_field_tag;
use weylq_core::{
    FieldTag, FractionContext, LinearSystem, ModulePresentation, OpMatrix, VarSet, WeylOp,
};

use crate::parse::parse_operator;

/// Raw JSON shape of a system file:
///
/// ```json
/// {
///   "m": 1,
///   "field": "q",
///   "K_den": [1],
///   "A": [["x1", "d1 + 1"]],
///   "rhs": ["1"]
/// }
/// ```
///
/// `K_den` defaults to the empty set and `rhs` to all zeros; every entry of
/// `A` and `rhs` is an expression in the CLI grammar.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    m: usize,
    field: String,
    #[serde(rename = "K_den", default)]
    k_den: Vec<usize>,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    #[serde(default)]
    rhs: Option<Vec<String>>,
}

/// A parsed and validated system file.
pub struct LoadedSystem {
    pub m: usize,
    pub field: FieldTag,
    pub k_den: VarSet,
    /// Rectangular, nonempty grid of operators; rows are equations (or
    /// generator rows for the module commands).
    pub a: Vec<Vec<WeylOp>>,
    /// One right-hand side per row; zeros when the file omits `rhs`.
    pub rhs: Vec<WeylOp>,
}

/// Reads and validates a system file.
pub fn load_system(path: &Path) -> Result<LoadedSystem, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let raw: RawSystem =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let m = raw.m;
    if m == 0 {
        return Err("m must be at least 1".to_string());
    }
    let field = parse_field_tag(&raw.field)
        .map_err(|_| format!("invalid field {:?} (expected \"q\" or \"fp:<prime>\")", raw.field))?;
    for &i in &raw.k_den {
        if i == 0 || i > m {
            return Err(format!("K_den index {i} is not in 1..={m}"));
        }
    }
    let k_den = VarSet::from_indices(m, &raw.k_den);
    if raw.a.is_empty() || raw.a[0].is_empty() {
        return Err("A must have at least one row and one column".to_string());
    }
    let cols = raw.a[0].len();
    let mut a = Vec::with_capacity(raw.a.len());
    for (j, row) in raw.a.iter().enumerate() {
        if row.len() != cols {
            return Err(format!("A row {j} has {} entries, expected {cols}", row.len()));
        }
        let mut ops = Vec::with_capacity(cols);
        for (i, src) in row.iter().enumerate() {
            ops.push(parse_operator(src, m, field).map_err(|e| format!("A[{j}][{i}]: {e}"))?);
        }
        a.push(ops);
    }
    let rhs = match raw.rhs {
        Some(list) => {
            if list.len() != a.len() {
                return Err(format!(
                    "rhs has {} entries, expected one per row of A ({})",
                    list.len(),
                    a.len()
                ));
            }
            list.iter()
                .enumerate()
                .map(|(j, src)| parse_operator(src, m, field).map_err(|e| format!("rhs[{j}]: {e}")))
                .collect::<Result<Vec<_>, _>>()?
        }
        None => vec![WeylOp::zero(m, field); a.len()],
    };
    Ok(LoadedSystem {
        m,
        field,
        k_den,
        a,
        rhs,
    })
}

impl LoadedSystem {
    /// The grid as an operator matrix.
    pub fn op_matrix(&self) -> Result<OpMatrix, String> {
        OpMatrix::from_rows(self.a.clone(), self.m, self.field).map_err(|e| e.to_string())
    }

    /// The file as a linear system over the fraction algebra with
    /// denominator set `K_den`.
    pub fn linear_system(&self) -> Result<LinearSystem, String> {
        let ctx = FractionContext::new(self.m, self.field, VarSet::full(self.m), self.k_den)
            .map_err(|e| e.to_string())?;
        LinearSystem::new(self.op_matrix()?, self.rhs.clone(), ctx).map_err(|e| e.to_string())
    }

    /// The grid rows as generators of a module presentation.
    pub fn presentation(&self) -> Result<ModulePresentation, String> {
        ModulePresentation::new(self.a.clone(), self.m, self.field).map_err(|e| e.to_string())
    }
}

/// Reads the one-operator-per-line plain format; blank lines are skipped.
pub fn load_operator_lines(path: &Path, m: usize, field: FieldTag) -> Result<Vec<WeylOp>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut ops = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        ops.push(
            parse_operator(line, m, field)
                .map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))?,
        );
    }
    if ops.is_empty() {
        return Err(format!("{}: no operators found", path.display()));
    }
    Ok(ops)
}
