//! Iterated Arnold cat map on square grids.
//!
//! The forward step sends `(x, y)` to `((x + y) mod N, (x + 2y) mod N)` —
//! the matrix [[1,1],[1,2]] — and the inverse applies [[2,−1],[−1,1]]
//! mod N. Both are bijections on the N×N torus, so iterating them permutes
//! coordinates without ever touching values.

use crate::error::{Error, Result};
use crate::spectral::ComplexGrid;

/// Upper bound on the iteration count, to cap work on hostile inputs.
pub const MAX_ITERATIONS: u32 = 1024;

/// Side length and iteration count for one map application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArnoldParams {
    grid_size: usize,
    iterations: u32,
}

impl ArnoldParams {
    pub fn new(grid_size: usize, iterations: u32) -> Result<Self> {
        if grid_size == 0 {
            return Err(Error::precondition("grid size must be at least 1"));
        }
        if iterations > MAX_ITERATIONS {
            return Err(Error::precondition(format!(
                "iteration count {iterations} exceeds maximum {MAX_ITERATIONS}"
            )));
        }
        Ok(Self {
            grid_size,
            iterations,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn iterations(&self) -> u32 {
        self.iterations
    }
}

/// Which way to run the permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Apply the forward map `iterations` times to one cell.
pub fn arnold_forward(x: usize, y: usize, params: ArnoldParams) -> Result<(usize, usize)> {
    check_cell(x, y, params)?;
    let n = params.grid_size;
    let (mut x, mut y) = (x, y);
    for _ in 0..params.iterations {
        let nx = (x + y) % n;
        let ny = (x + 2 * y) % n;
        x = nx;
        y = ny;
    }
    Ok((x, y))
}

/// Apply the inverse map `iterations` times to one cell;
/// undoes [`arnold_forward`] with equal params.
pub fn arnold_inverse(x: usize, y: usize, params: ArnoldParams) -> Result<(usize, usize)> {
    check_cell(x, y, params)?;
    let n = params.grid_size;
    let (mut x, mut y) = (x, y);
    for _ in 0..params.iterations {
        // (2x − y, −x + y) mod n, kept non-negative before the reduction.
        let nx = (2 * x + n - y) % n;
        let ny = (y + n - x) % n;
        x = nx;
        y = ny;
    }
    Ok((x, y))
}

fn check_cell(x: usize, y: usize, params: ArnoldParams) -> Result<()> {
    if x >= params.grid_size || y >= params.grid_size {
        return Err(Error::precondition(format!(
            "cell ({x}, {y}) outside {0}x{0} grid",
            params.grid_size
        )));
    }
    Ok(())
}

/// Permute the positions of a square grid's values: `out[map(x,y)] = in[x,y]`.
/// The value multiset is untouched; `Inverse` composes with `Forward` to the
/// identity.
pub fn arnold_permute_grid(
    grid: &ComplexGrid,
    params: ArnoldParams,
    direction: Direction,
) -> Result<ComplexGrid> {
    let n = params.grid_size;
    if grid.rows() != n || grid.cols() != n {
        return Err(Error::precondition(format!(
            "grid is {}x{}, expected {n}x{n}",
            grid.rows(),
            grid.cols()
        )));
    }
    let mut out = ComplexGrid::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let (nx, ny) = match direction {
                Direction::Forward => arnold_forward(x, y, params)?,
                Direction::Inverse => arnold_inverse(x, y, params)?,
            };
            out.set(nx, ny, grid.get(x, y));
        }
    }
    Ok(out)
}
