use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::class::{check_bounds, consistent_with_all, ClassTable, HypothesisClass, HypothesisId};
use crate::error::Result;
use crate::example::{Cell, LabeledExample};

/// `H(Z)`: the hypotheses consistent with every example received so far.
///
/// Explicit version spaces carry a membership bitset over a [`ClassTable`];
/// implicit ones carry only the example list and answer membership by checking
/// consistency.
pub struct VersionSpace<C: HypothesisClass> {
    class: Arc<C>,
    examples: Vec<LabeledExample>,
    explicit: Option<Explicit<C>>,
}

struct Explicit<C: HypothesisClass> {
    table: Arc<ClassTable<C>>,
    members: FixedBitSet,
}

impl<C: HypothesisClass> Clone for Explicit<C> {
    fn clone(&self) -> Self {
        Explicit { table: Arc::clone(&self.table), members: self.members.clone() }
    }
}

impl<C: HypothesisClass> Clone for VersionSpace<C> {
    fn clone(&self) -> Self {
        VersionSpace {
            class: Arc::clone(&self.class),
            examples: self.examples.clone(),
            explicit: self.explicit.clone(),
        }
    }
}

impl<C: HypothesisClass> std::fmt::Debug for VersionSpace<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VersionSpace")
            .field("examples", &self.examples)
            .field("size", &self.size())
            .finish()
    }
}

impl<C: HypothesisClass> VersionSpace<C> {
    /// The whole class, enumerated.
    pub fn full(table: Arc<ClassTable<C>>) -> Self {
        let members = table.full_set();
        VersionSpace {
            class: Arc::clone(table.class()),
            examples: Vec::new(),
            explicit: Some(Explicit { table, members }),
        }
    }

    /// The whole class, never enumerated.
    pub fn implicit(class: Arc<C>) -> Self {
        VersionSpace { class, examples: Vec::new(), explicit: None }
    }

    pub fn class(&self) -> &Arc<C> {
        &self.class
    }

    pub fn table(&self) -> Option<&Arc<ClassTable<C>>> {
        self.explicit.as_ref().map(|e| &e.table)
    }

    pub fn members(&self) -> Option<&FixedBitSet> {
        self.explicit.as_ref().map(|e| &e.members)
    }

    pub fn is_explicit(&self) -> bool {
        self.explicit.is_some()
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn shown(&self, cell: Cell) -> bool {
        self.examples.iter().any(|z| z.cell == cell)
    }

    /// `None` for implicit version spaces.
    pub fn size(&self) -> Option<usize> {
        self.explicit.as_ref().map(|e| e.members.count_ones(..))
    }

    pub fn contains(&self, h: &C::Hypothesis) -> bool {
        match &self.explicit {
            Some(e) => e.table.id_of(h).is_some_and(|id| e.members.contains(id.index())),
            None => self.class.is_valid(h) && consistent_with_all(&*self.class, h, &self.examples),
        }
    }

    /// Member hypotheses in canonical order. Implicit version spaces yield nothing.
    pub fn iter(&self) -> impl Iterator<Item = &C::Hypothesis> + '_ {
        self.explicit
            .iter()
            .flat_map(|e| e.members.ones().map(move |i| e.table.get(HypothesisId(i as u32))))
    }

    /// `{h ∈ vs : consistent(h, z)}` with `z` appended to the example list.
    /// An empty result is legal here; callers decide whether it is an error.
    pub fn update(&self, z: LabeledExample) -> Result<Self> {
        check_bounds(&*self.class, z.cell)?;
        let mut next = self.clone();
        if self.examples.contains(&z) {
            return Ok(next);
        }
        next.examples.push(z);
        if let Some(e) = &mut next.explicit {
            let pos = e.table.positive_set(z.cell);
            if z.label {
                e.members.intersect_with(pos);
            } else {
                e.members.difference_with(pos);
            }
        }
        Ok(next)
    }

    pub fn is_empty(&self) -> Option<bool> {
        self.explicit.as_ref().map(|e| e.members.is_clear())
    }
}
