//! Everything derived from one group, computed once.

use crate::ct::{all_subdivisions, CtSubdivision};
use crate::error::Result;
use crate::group::GroupSpec;
use crate::quiver::Model;
use crate::recipe::{classify_all, Marking, RecipeRole};

#[derive(Clone, Debug)]
pub struct Analysis {
    pub model: Model,
    pub marking: Marking,
    /// Indexed by character.
    pub roles: Vec<RecipeRole>,
    /// Indexed by character; `None` for the trivial character.
    pub cts: Vec<Option<CtSubdivision>>,
}

impl Analysis {
    pub fn new(spec: &GroupSpec, seed_offset: usize) -> Result<Self> {
        Self::from_model(Model::with_seed_offset(spec, seed_offset)?)
    }

    pub fn from_model(model: Model) -> Result<Self> {
        let marking = Marking::compute(&model)?;
        let roles = classify_all(&model, &marking)?;
        let cts = all_subdivisions(&model, &marking)?;
        Ok(Analysis { model, marking, roles, cts })
    }
}
