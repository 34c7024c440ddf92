//! Rasterized encirclement test: does an open Ω contain a Jordan curve around K?

use std::collections::VecDeque;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::region::Region;
use crate::error::{Error, Result};

/// Margin in cells below which the answer is unresolved.
pub const MARGIN_CELLS: u32 = 2;
const K_BOUNDARY_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Encirclement {
    Encircled,
    NotEncircled,
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    /// Closure of Ω.
    Omega,
    /// Unbounded component of the complement of Ω̄.
    Unbounded,
    /// Bounded components of the complement of Ω̄.
    Bounded,
}

#[derive(Clone, Debug, Serialize)]
pub struct Raster {
    pub nx: usize,
    pub ny: usize,
    /// [x_min, x_max, y_min, y_max] of the raster.
    pub bbox: [f64; 4],
    pub cells: Vec<Cell>,
    pub k_mask: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EncircleReport {
    pub status: Encirclement,
    /// Minimal 8-connected cell distance from K to the unbounded component.
    pub k_to_unbounded: Option<u32>,
    /// Minimal cell distance between bounded and unbounded components.
    pub bounded_to_unbounded: Option<u32>,
    #[serde(skip)]
    pub raster: Raster,
}

impl Raster {
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Binary PGM: Ω̄ gray, unbounded white, bounded black, K dark gray.
    pub fn write_pgm(&self, mut w: impl Write) -> std::io::Result<()> {
        write!(w, "P5\n{} {}\n255\n", self.nx, self.ny)?;
        let mut buf = Vec::with_capacity(self.nx * self.ny);
        for j in (0..self.ny).rev() {
            for i in 0..self.nx {
                let k = self.idx(i, j);
                buf.push(if self.k_mask[k] {
                    64
                } else {
                    match self.cells[k] {
                        Cell::Omega => 160,
                        Cell::Unbounded => 255,
                        Cell::Bounded => 0,
                    }
                });
            }
        }
        w.write_all(&buf)
    }
}

/// Multi-source BFS distances over the 8-neighbourhood.
fn distances(nx: usize, ny: usize, sources: impl Iterator<Item = usize>) -> Vec<u32> {
    let mut d = vec![u32::MAX; nx * ny];
    let mut q = VecDeque::new();
    for s in sources {
        d[s] = 0;
        q.push_back(s);
    }
    while let Some(c) = q.pop_front() {
        let (i, j) = ((c % nx) as i64, (c / nx) as i64);
        for di in -1..=1 {
            for dj in -1..=1 {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a >= nx as i64 || b >= ny as i64 {
                    continue;
                }
                let n = b as usize * nx + a as usize;
                if d[n] == u32::MAX {
                    d[n] = d[c] + 1;
                    q.push_back(n);
                }
            }
        }
    }
    d
}

/// Tri-state encirclement of K by Ω on a resolution × resolution raster.
pub fn encircles(omega: &Region, k: &Region, resolution: usize) -> Result<EncircleReport> {
    omega.validate()?;
    k.validate()?;
    if resolution < 16 {
        return Err(Error::invalid(format!("resolution must be at least 16, got {resolution}")));
    }
    let (bo, bk) = (omega.bounding_box(), k.bounding_box());
    let mut bb = [bo[0].min(bk[0]), bo[1].max(bk[1]), bo[2].min(bk[2]), bo[3].max(bk[3])];
    let side = (bb[1] - bb[0]).max(bb[3] - bb[2]);
    let (cx, cy) = (0.5 * (bb[0] + bb[1]), 0.5 * (bb[2] + bb[3]));
    let half = 0.55 * side;
    bb = [cx - half, cx + half, cy - half, cy + half];
    let (nx, ny) = (resolution, resolution);
    let h = 2.0 * half / resolution as f64;
    let center = |i: usize, j: usize| Complex64::new(bb[0] + (i as f64 + 0.5) * h, bb[2] + (j as f64 + 0.5) * h);

    let mut omega_mask = vec![false; nx * ny];
    let mut k_mask = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let z = center(i, j);
            omega_mask[j * nx + i] = omega.contains(z);
            k_mask[j * nx + i] = k.contains(z);
        }
    }
    // thin or small K still marks the cells it touches
    for z in k.boundary_samples(K_BOUNDARY_SAMPLES) {
        let i = (((z.re - bb[0]) / h) as usize).min(nx - 1);
        let j = (((z.im - bb[2]) / h) as usize).min(ny - 1);
        k_mask[j * nx + i] = true;
    }

    // 4-connected flood fill of the complement from the raster border
    let mut cells: Vec<Cell> = omega_mask.iter().map(|&o| if o { Cell::Omega } else { Cell::Bounded }).collect();
    let mut q = VecDeque::new();
    for i in 0..nx {
        for j in [0, ny - 1] {
            q.push_back(j * nx + i);
        }
    }
    for j in 0..ny {
        for i in [0, nx - 1] {
            q.push_back(j * nx + i);
        }
    }
    while let Some(c) = q.pop_front() {
        if cells[c] != Cell::Bounded {
            continue;
        }
        cells[c] = Cell::Unbounded;
        let (i, j) = (c % nx, c / nx);
        if i > 0 {
            q.push_back(c - 1);
        }
        if i + 1 < nx {
            q.push_back(c + 1);
        }
        if j > 0 {
            q.push_back(c - nx);
        }
        if j + 1 < ny {
            q.push_back(c + nx);
        }
    }

    let du = distances(nx, ny, (0..nx * ny).filter(|&c| cells[c] == Cell::Unbounded));
    let domega = distances(nx, ny, (0..nx * ny).filter(|&c| cells[c] == Cell::Omega));
    let k_cells: Vec<usize> = (0..nx * ny).filter(|&c| k_mask[c]).collect();
    let k_to_u = k_cells.iter().map(|&c| du[c]).min().filter(|&d| d != u32::MAX);
    let b_to_u = (0..nx * ny).filter(|&c| cells[c] == Cell::Bounded).map(|c| du[c]).min();

    let far_outside = k_cells.iter().any(|&c| cells[c] == Cell::Unbounded && domega[c] > MARGIN_CELLS);
    let status = if far_outside {
        Encirclement::NotEncircled
    } else if k_to_u.is_some_and(|d| d <= MARGIN_CELLS) {
        Encirclement::Unresolved
    } else if b_to_u.is_none_or(|d| d > MARGIN_CELLS) {
        Encirclement::Encircled
    } else {
        Encirclement::Unresolved
    };
    Ok(EncircleReport {
        status,
        k_to_unbounded: k_to_u,
        bounded_to_unbounded: b_to_u,
        raster: Raster { nx, ny, bbox: bb, cells, k_mask },
    })
}
