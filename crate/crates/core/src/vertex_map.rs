use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::graph::VertexId;

/// Dense per-vertex storage indexed by 1-based vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexMap<T> {
    data: Vec<T>,
}

impl<T> VertexMap<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(VertexId) -> T) -> Self {
        Self {
            data: (1..=n).map(&mut f).collect(),
        }
    }

    /// Wraps values listed in vertex order `1..=n`.
    pub fn from_vec(data: Vec<T>) -> Self {
        Self { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, v: VertexId) -> Option<&T> {
        v.checked_sub(1).and_then(|i| self.data.get(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &T)> + '_ {
        self.data.iter().enumerate().map(|(i, x)| (i + 1, x))
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, mut f: impl FnMut(VertexId, &T) -> U) -> VertexMap<U> {
        VertexMap {
            data: self.iter().map(|(v, x)| f(v, x)).collect(),
        }
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }
}

impl<T: Clone> VertexMap<T> {
    pub fn filled(n: usize, value: T) -> Self {
        Self { data: vec![value; n] }
    }
}

impl<T> Index<VertexId> for VertexMap<T> {
    type Output = T;

    fn index(&self, v: VertexId) -> &T {
        &self.data[v - 1]
    }
}

impl<T> IndexMut<VertexId> for VertexMap<T> {
    fn index_mut(&mut self, v: VertexId) -> &mut T {
        &mut self.data[v - 1]
    }
}
