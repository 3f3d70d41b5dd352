//! Lattice layouts: single chain, T-junction, and multi-T junctions (a
//! horizontal rail with several vertical stems).

use super::ModelError;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegOrientation {
    Horizontal,
    Vertical,
}

/// Nearest-neighbor bond directed along +x (horizontal) or +y (vertical):
/// `to = from + ê`.
#[derive(Debug, Clone, Copy)]
pub struct Bond {
    pub from: usize,
    pub to: usize,
    pub orientation: LegOrientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeometrySpec {
    /// `len` sites in a row.
    Chain { len: usize },
    /// Horizontal rail of `2*leg_len + 1` sites with a vertical stem of
    /// `leg_len` sites hanging below the central site; `N = 3*leg_len + 1`.
    TJunction { leg_len: usize },
    /// `n_stems + 1` horizontal chains of `leg_len` sites separated by single
    /// junction sites, each junction carrying a stem of `leg_len` sites.
    MultiT { leg_len: usize, n_stems: usize },
}

/// Immutable site/bond layout. Site indexing is deterministic:
/// left-to-right along the horizontal rail, then stem sites bottom-up for
/// each stem from left to right.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub spec: GeometrySpec,
    pub sites: Vec<(i32, i32)>,
    pub bonds: Vec<Bond>,
    /// Rail indices of the junction sites (stem attachment points).
    pub junctions: Vec<usize>,
    /// Number of rail sites (indices `0..rail_len` are the rail).
    pub rail_len: usize,
    /// Per stem: site indices ordered top (adjacent to the junction) to bottom.
    pub stems: Vec<Vec<usize>>,
    index: HashMap<(i32, i32), usize>,
}

impl Geometry {
    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn site_at(&self, coord: (i32, i32)) -> Option<usize> {
        self.index.get(&coord).copied()
    }

    pub fn coord(&self, site: usize) -> (i32, i32) {
        self.sites[site]
    }
}

pub fn build_geometry(spec: GeometrySpec) -> Result<Geometry, ModelError> {
    match spec {
        GeometrySpec::Chain { len } => {
            if len < 2 {
                return Err(ModelError::InvalidGeometry(format!(
                    "chain length must be at least 2, got {len}"
                )));
            }
            let sites: Vec<(i32, i32)> = (0..len as i32).map(|x| (x, 0)).collect();
            let bonds = (0..len - 1)
                .map(|i| Bond {
                    from: i,
                    to: i + 1,
                    orientation: LegOrientation::Horizontal,
                })
                .collect();
            Ok(finish(spec, sites, bonds, vec![], len, vec![]))
        }
        GeometrySpec::TJunction { leg_len } => build_multi_t(
            GeometrySpec::TJunction { leg_len },
            leg_len,
            1,
        ),
        GeometrySpec::MultiT { leg_len, n_stems } => {
            if n_stems == 0 {
                return Err(ModelError::InvalidGeometry(
                    "multi-T junction needs at least one stem".into(),
                ));
            }
            build_multi_t(spec, leg_len, n_stems)
        }
    }
}

fn build_multi_t(
    spec: GeometrySpec,
    leg_len: usize,
    n_stems: usize,
) -> Result<Geometry, ModelError> {
    if leg_len < 2 {
        return Err(ModelError::InvalidGeometry(format!(
            "leg length must be at least 2, got {leg_len}"
        )));
    }
    let l = leg_len as i32;
    let rail_len = (n_stems + 1) * leg_len + n_stems;
    let mut sites: Vec<(i32, i32)> = (0..rail_len as i32).map(|x| (x, 0)).collect();
    let mut bonds: Vec<Bond> = (0..rail_len - 1)
        .map(|i| Bond {
            from: i,
            to: i + 1,
            orientation: LegOrientation::Horizontal,
        })
        .collect();

    // junctions sit between consecutive chains: x = k*(L+1) + L for k-th stem
    let mut junctions = Vec::with_capacity(n_stems);
    let mut stems = Vec::with_capacity(n_stems);
    for k in 0..n_stems {
        let jx = (k as i32) * (l + 1) + l;
        let junction = jx as usize;
        junctions.push(junction);
        // stem sites bottom-up: (jx, -L) .. (jx, -1)
        let base = sites.len();
        for j in 0..l {
            sites.push((jx, -(l - j)));
        }
        // vertical bonds within the stem: from (jx, -y-1) to (jx, -y)
        for j in 0..leg_len - 1 {
            bonds.push(Bond {
                from: base + j,
                to: base + j + 1,
                orientation: LegOrientation::Vertical,
            });
        }
        // stem top to junction site
        bonds.push(Bond {
            from: base + leg_len - 1,
            to: junction,
            orientation: LegOrientation::Vertical,
        });
        // top-to-bottom ordering for the schedule builders
        let stem_top_down: Vec<usize> = (0..leg_len).map(|j| base + leg_len - 1 - j).collect();
        stems.push(stem_top_down);
    }
    Ok(finish(spec, sites, bonds, junctions, rail_len, stems))
}

fn finish(
    spec: GeometrySpec,
    sites: Vec<(i32, i32)>,
    bonds: Vec<Bond>,
    junctions: Vec<usize>,
    rail_len: usize,
    stems: Vec<Vec<usize>>,
) -> Geometry {
    let index = sites
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect::<HashMap<_, _>>();
    Geometry {
        spec,
        sites,
        bonds,
        junctions,
        rail_len,
        stems,
        index,
    }
}
