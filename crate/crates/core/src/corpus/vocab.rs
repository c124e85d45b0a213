use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

pub const DEFAULT_MIN_COUNT: u64 = 5;

/// Noun and verb predicates live in separate namespaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Noun,
    Verb,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Noun => "noun",
            Role::Verb => "verb",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "noun" => Some(Role::Noun),
            "verb" => Some(Role::Verb),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Index of a predicate in its vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateId(pub(crate) usize);

impl PredicateId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabEntry {
    pub form: String,
    pub role: Role,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    // Indexed by role: nouns, then verbs.
    lookup: [BTreeMap<String, PredicateId>; 2],
}

impl Vocabulary {
    pub fn from_entries(entries: Vec<VocabEntry>) -> Result<Self> {
        let mut lookup = [BTreeMap::new(), BTreeMap::new()];
        for (i, e) in entries.iter().enumerate() {
            if lookup[e.role as usize].insert(e.form.clone(), PredicateId(i)).is_some() {
                return Err(Error::InconsistentModel(format!(
                    "duplicate vocabulary entry `{}` ({})",
                    e.form, e.role
                )));
            }
        }
        Ok(Self { entries, lookup })
    }

    /// Keeps every (form, role) seen at least `min_count` times. Entries are
    /// ordered nouns first, then verbs, each lexicographically, so the result
    /// does not depend on the order of `counts`.
    pub fn from_counts<I, S>(counts: I, min_count: u64) -> Self
    where
        I: IntoIterator<Item = (S, Role, u64)>,
        S: Into<String>,
    {
        let mut merged: BTreeMap<(Role, String), u64> = BTreeMap::new();
        for (form, role, n) in counts {
            *merged.entry((role, form.into())).or_default() += n;
        }
        let entries = merged
            .into_iter()
            .filter(|&(_, n)| n >= min_count)
            .map(|((role, form), count)| VocabEntry { form, role, count })
            .collect();
        Self::from_entries(entries).expect("keys are unique")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn ids(&self) -> impl Iterator<Item = PredicateId> + '_ {
        (0..self.entries.len()).map(PredicateId)
    }

    pub fn entry(&self, id: PredicateId) -> &VocabEntry {
        &self.entries[id.0]
    }

    pub fn form(&self, id: PredicateId) -> &str {
        &self.entries[id.0].form
    }

    pub fn role(&self, id: PredicateId) -> Role {
        self.entries[id.0].role
    }

    pub fn get(&self, form: &str, role: Role) -> Option<PredicateId> {
        self.lookup[role as usize].get(form).copied()
    }

    /// Looks a form up in either namespace. When it exists in both, `hint`
    /// picks the role; without a hint the lookup is ambiguous.
    pub fn resolve(&self, form: &str, hint: Option<Role>) -> Result<PredicateId> {
        match (self.get(form, Role::Noun), self.get(form, Role::Verb)) {
            (Some(n), Some(v)) => match hint {
                Some(Role::Noun) => Ok(n),
                Some(Role::Verb) => Ok(v),
                None => Err(Error::AmbiguousPredicate(form.into())),
            },
            (Some(id), None) | (None, Some(id)) => Ok(id),
            (None, None) => Err(Error::UnknownPredicate(form.into())),
        }
    }

    pub fn contains(&self, id: PredicateId) -> bool {
        id.0 < self.entries.len()
    }
}
