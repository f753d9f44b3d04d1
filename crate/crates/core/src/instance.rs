use crate::error::{CoreError, Result};
use crate::matrix::Mat;

/// A symmetric Koopmans-Beckman QAP instance: n locations in the unit square,
/// an n-by-n symmetric flow matrix with zero diagonal, and the derived
/// Euclidean distance matrix. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct QapInstance {
    n: usize,
    coords: Vec<[f64; 2]>,
    flows: Mat,
    distances: Mat,
}

impl QapInstance {
    /// Validates the flow-matrix invariants (symmetry, zero diagonal,
    /// nonnegative finite entries) and derives the distance matrix.
    pub fn new(coords: Vec<[f64; 2]>, flows: Mat) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(CoreError::InvalidInput("empty instance".into()));
        }
        if flows.n() != n {
            return Err(CoreError::InvalidInput(format!(
                "flow matrix is {}x{} but there are {} locations",
                flows.n(),
                flows.n(),
                n
            )));
        }
        for (i, row) in flows.data().chunks(n).enumerate() {
            for (j, &f) in row.iter().enumerate() {
                if !f.is_finite() || f < 0.0 {
                    return Err(CoreError::InvalidInput(format!(
                        "flow[{i}][{j}] = {f} is not a finite nonnegative value"
                    )));
                }
            }
        }
        if !flows.is_symmetric() {
            return Err(CoreError::InvalidInput("flow matrix is not symmetric".into()));
        }
        if !flows.has_zero_diagonal() {
            return Err(CoreError::InvalidInput(
                "flow matrix has a nonzero diagonal entry".into(),
            ));
        }
        let distances = distance_matrix(&coords)?;
        Ok(Self {
            n,
            coords,
            flows,
            distances,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn flows(&self) -> &Mat {
        &self.flows
    }

    pub fn distances(&self) -> &Mat {
        &self.distances
    }
}

/// Pairwise Euclidean distances between the given points.
pub fn distance_matrix(coords: &[[f64; 2]]) -> Result<Mat> {
    let n = coords.len();
    if n == 0 {
        return Err(CoreError::InvalidInput("empty coordinate list".into()));
    }
    for (i, c) in coords.iter().enumerate() {
        if !c[0].is_finite() || !c[1].is_finite() {
            return Err(CoreError::InvalidInput(format!(
                "coordinate {i} = ({}, {}) is not finite",
                c[0], c[1]
            )));
        }
    }
    let mut d = Mat::zeros(n);
    for k in 0..n {
        for l in (k + 1)..n {
            let dx = coords[k][0] - coords[l][0];
            let dy = coords[k][1] - coords[l][1];
            let dist = (dx * dx + dy * dy).sqrt();
            d[(k, l)] = dist;
            d[(l, k)] = dist;
        }
    }
    Ok(d)
}

/// A complete assignment. `perm[k]` is the facility placed at location `k`;
/// equivalently, the binary matrix X of the integer program has
/// X[perm[k]][k] = 1. All other orientations in this workspace derive from
/// this one (the MDP selects a location, then fills it with a facility).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    perm: Vec<usize>,
}

impl Assignment {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &f in &perm {
            if f >= n || seen[f] {
                return Err(CoreError::InvalidInput(format!(
                    "{perm:?} is not a permutation of 0..{n}"
                )));
            }
            seen[f] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// Facility placed at location `k`.
    pub fn facility_at(&self, k: usize) -> usize {
        self.perm[k]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }
}

/// Total cost of `assignment` on `instance`:
/// sum over location pairs (k, l) of F[perm[k]][perm[l]] * D[k][l].
pub fn objective(instance: &QapInstance, assignment: &Assignment) -> Result<f64> {
    let n = instance.n();
    if assignment.n() != n {
        return Err(CoreError::InvalidInput(format!(
            "assignment has size {} but instance has size {n}",
            assignment.n()
        )));
    }
    let perm = assignment.as_slice();
    let mut total = 0.0;
    for k in 0..n {
        let fk = perm[k];
        let drow = instance.distances().row(k);
        let frow = instance.flows().row(fk);
        for l in 0..n {
            total += frow[perm[l]] * drow[l];
        }
    }
    Ok(total)
}
