//! Resource guards for the exhaustive searches.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Largest pattern vertex count accepted by copy enumeration.
    pub pattern_vertices: usize,
    /// Maximum number of copies enumerated before giving up.
    pub copies: usize,
    /// Maximum number of vertex maps V(H) -> V(L) considered by `disc`.
    pub disc_maps: u64,
    /// Maximum copy count accepted by the exact oracles.
    pub oracle_copies: usize,
    /// Maximum branch-and-bound nodes explored by an exact oracle.
    pub oracle_nodes: u64,
    /// Largest pattern accepted by the acyclic-subgraph DP.
    pub gamma_vertices: usize,
    /// Largest pattern accepted by the bipartition brute force.
    pub bipartite_vertices: usize,
    /// Largest n accepted by the K_n decomposition search.
    pub decomposition_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            pattern_vertices: 8,
            copies: 5_000_000,
            disc_maps: 10_000_000,
            oracle_copies: 20_000,
            oracle_nodes: 2_000_000,
            gamma_vertices: 16,
            bipartite_vertices: 24,
            decomposition_n: 15,
        }
    }
}

impl Caps {
    /// Applies overrides of the form `copies=1000,oracle_nodes=50000`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("cap override {item:?} is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("cap override {item:?} is not an integer")))?;
            let as_usize = value as usize;
            match key.trim() {
                "pattern_vertices" => self.pattern_vertices = as_usize,
                "copies" => self.copies = as_usize,
                "disc_maps" => self.disc_maps = value,
                "oracle_copies" => self.oracle_copies = as_usize,
                "oracle_nodes" => self.oracle_nodes = value,
                "gamma_vertices" => self.gamma_vertices = as_usize,
                "bipartite_vertices" => self.bipartite_vertices = as_usize,
                "decomposition_n" => self.decomposition_n = as_usize,
                other => return Err(Error::InvalidArgument(format!("unknown cap {other:?}"))),
            }
        }
        Ok(self)
    }
}
