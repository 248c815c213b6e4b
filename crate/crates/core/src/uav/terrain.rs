use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaussian hill added to the base elevation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub x: f64,
    pub y: f64,
    pub height: f64,
    pub spread: f64,
}

/// Generator parameters for a synthetic elevation grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerrainSpec {
    pub width: f64,
    pub depth: f64,
    pub cell_size: f64,
    #[serde(default)]
    pub base: f64,
    #[serde(default)]
    pub bumps: Vec<Bump>,
}

impl TerrainSpec {
    pub fn build(&self) -> Result<Terrain> {
        if !(self.cell_size > 0.0 && self.width > 0.0 && self.depth > 0.0) {
            return Err(Error::config("terrain width, depth and cell size must be positive"));
        }
        let nx = (self.width / self.cell_size).round() as usize + 1;
        let ny = (self.depth / self.cell_size).round() as usize + 1;
        let mut heights = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                let (x, y) = (ix as f64 * self.cell_size, iy as f64 * self.cell_size);
                let h: f64 = self
                    .bumps
                    .iter()
                    .map(|b| {
                        let r2 = (x - b.x).powi(2) + (y - b.y).powi(2);
                        b.height * (-r2 / (2.0 * b.spread * b.spread)).exp()
                    })
                    .sum();
                heights.push(self.base + h);
            }
        }
        Terrain::new([0.0, 0.0], self.cell_size, nx, ny, heights)
    }
}

/// Ground elevation on a regular grid, row-major with `x` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Terrain {
    origin: [f64; 2],
    cell_size: f64,
    nx: usize,
    ny: usize,
    heights: Vec<f64>,
}

impl Terrain {
    pub fn new(origin: [f64; 2], cell_size: f64, nx: usize, ny: usize, heights: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 2 || heights.len() != nx * ny {
            return Err(Error::config(format!(
                "terrain grid must be at least 2x2 with nx*ny heights ({nx}x{ny}, {} given)",
                heights.len()
            )));
        }
        if heights.iter().any(|h| !h.is_finite()) {
            return Err(Error::config("terrain heights must be finite"));
        }
        if !(cell_size > 0.0) {
            return Err(Error::config("terrain cell size must be positive"));
        }
        Ok(Self {
            origin,
            cell_size,
            nx,
            ny,
            heights,
        })
    }

    /// `[xmin, ymin, xmax, ymax]`.
    pub fn extent(&self) -> [f64; 4] {
        [
            self.origin[0],
            self.origin[1],
            self.origin[0] + (self.nx - 1) as f64 * self.cell_size,
            self.origin[1] + (self.ny - 1) as f64 * self.cell_size,
        ]
    }

    pub fn min_height(&self) -> f64 {
        self.heights.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_height(&self) -> f64 {
        self.heights.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn height_at(&self, x: f64, y: f64) -> Option<f64> {
        let fx = (x - self.origin[0]) / self.cell_size;
        let fy = (y - self.origin[1]) / self.cell_size;
        let (mx, my) = ((self.nx - 1) as f64, (self.ny - 1) as f64);
        if !(0.0..=mx).contains(&fx) || !(0.0..=my).contains(&fy) {
            return None;
        }
        let ix = (fx.floor() as usize).min(self.nx - 2);
        let iy = (fy.floor() as usize).min(self.ny - 2);
        let (tx, ty) = (fx - ix as f64, fy - iy as f64);
        let h = |i: usize, j: usize| self.heights[j * self.nx + i];
        let bottom = h(ix, iy) * (1.0 - tx) + h(ix + 1, iy) * tx;
        let top = h(ix, iy + 1) * (1.0 - tx) + h(ix + 1, iy + 1) * tx;
        Some(bottom * (1.0 - ty) + top * ty)
    }
}
