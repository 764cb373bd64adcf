use serde::Serialize;

use crate::error::{Error, Result};
use crate::weyl::WeylOp;

/// Finitely generated left ideal of `D_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DIdeal {
    n: usize,
    generators: Vec<WeylOp>,
}

impl DIdeal {
    /// Zero generators are dropped; all generators must live in `D_n`.
    pub fn new(n: usize, generators: Vec<WeylOp>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.nvars() != n) {
            return Err(Error::DimensionMismatch(format!("generator in D_{} for an ideal of D_{}", g.nvars(), n)));
        }
        Ok(DIdeal { n, generators: generators.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[WeylOp] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Ideal generated by both generator lists.
    pub fn sum(&self, other: &DIdeal) -> Result<DIdeal> {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        DIdeal::new(self.n, g)
    }

    pub fn rendered(&self) -> Vec<String> {
        self.generators.iter().map(WeylOp::render).collect()
    }
}

impl Serialize for DIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            nvars: usize,
            generators: Vec<String>,
        }
        Repr { nvars: self.n, generators: self.rendered() }.serialize(s)
    }
}
