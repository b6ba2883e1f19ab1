use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::vertex_map::VertexMap;

/// Vertex coloring with colors in `1..=palette_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: VertexMap<u32>,
    palette_size: u32,
}

impl Coloring {
    pub fn new(colors: VertexMap<u32>, palette_size: u32) -> Result<Self> {
        if let Some((v, &c)) = colors.iter().find(|&(_, &c)| c == 0 || c > palette_size) {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} has color {c} outside 1..={palette_size}"
            )));
        }
        Ok(Self { colors, palette_size })
    }

    /// Palette size is the largest color used.
    pub fn from_colors(colors: VertexMap<u32>) -> Result<Self> {
        let palette = colors.values().iter().copied().max().unwrap_or(1);
        Self::new(colors, palette)
    }

    /// Every vertex gets color 1.
    pub fn constant(n: usize) -> Self {
        Self {
            colors: VertexMap::filled(n, 1),
            palette_size: 1,
        }
    }

    /// Color = vertex id.
    pub fn identity(n: usize) -> Self {
        Self {
            colors: VertexMap::from_fn(n, |v| v as u32),
            palette_size: n.max(1) as u32,
        }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, v: VertexId) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &VertexMap<u32> {
        &self.colors
    }

    pub fn palette_size(&self) -> u32 {
        self.palette_size
    }

    pub fn distinct_colors(&self) -> usize {
        let mut seen: Vec<u32> = self.colors.values().to_vec();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Vertices of each used color, ascending.
    pub fn classes(&self) -> BTreeMap<u32, Vec<VertexId>> {
        let mut out: BTreeMap<u32, Vec<VertexId>> = BTreeMap::new();
        for (v, &c) in self.colors.iter() {
            out.entry(c).or_default().push(v);
        }
        out
    }
}
