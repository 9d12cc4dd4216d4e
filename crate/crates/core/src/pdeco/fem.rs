//! P1 finite-element assembly on the unit square with a uniform right-triangle
//! mesh (every cell split along the same diagonal) and homogeneous Neumann
//! boundary handling: interior mass and stiffness matrices plus the boundary
//! mass matrix of the observation term.

use super::sparse::Csr;

/// The assembled finite-element matrices on an `(g+1)²`-node grid of width
/// `h = 1/g`: `mass`, `stiffness`, their sum `forward` (the discrete forward
/// operator of `−Δy + y`), and the boundary mass matrix supported on boundary
/// nodes.
#[derive(Clone, Debug)]
pub struct FemMatrices {
    pub mass: Csr,
    pub stiffness: Csr,
    pub forward: Csr,
    pub boundary_mass: Csr,
    pub h: f64,
    pub divisions: usize,
    pub n: usize,
}

/// Node coordinates in row-major grid order.
pub fn node_coords(divisions: usize, idx: usize) -> (f64, f64) {
    let nx = divisions + 1;
    let (ix, iy) = (idx % nx, idx / nx);
    let h = 1.0 / divisions as f64;
    (ix as f64 * h, iy as f64 * h)
}

/// Element stiffness for a P1 triangle with vertices `p`, from the standard
/// gradient formula `K_ij = (b_i b_j + c_i c_j) / (4|T|)`.
fn tri_stiffness(p: [(f64, f64); 3]) -> [[f64; 3]; 3] {
    let b = [p[1].1 - p[2].1, p[2].1 - p[0].1, p[0].1 - p[1].1];
    let c = [p[2].0 - p[1].0, p[0].0 - p[2].0, p[1].0 - p[0].0];
    let area2 = (p[1].0 - p[0].0) * (p[2].1 - p[0].1) - (p[2].0 - p[0].0) * (p[1].1 - p[0].1);
    let area = 0.5 * area2.abs();
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
        }
    }
    k
}

/// Assemble the matrices for mesh width `h = 1/divisions`.
pub fn assemble_fem(divisions: usize) -> FemMatrices {
    assert!((2..=256).contains(&divisions), "mesh divisions out of supported range");
    let nx = divisions + 1;
    let n = nx * nx;
    let h = 1.0 / divisions as f64;
    let node = |ix: usize, iy: usize| iy * nx + ix;

    let mut mass_t = Vec::new();
    let mut stiff_t = Vec::new();
    for cy in 0..divisions {
        for cx in 0..divisions {
            // split along the cell diagonal from (cx, cy) to (cx+1, cy+1)
            let quad = [
                node(cx, cy),
                node(cx + 1, cy),
                node(cx + 1, cy + 1),
                node(cx, cy + 1),
            ];
            for tri in [[quad[0], quad[1], quad[2]], [quad[0], quad[2], quad[3]]] {
                let coords = [
                    node_coords(divisions, tri[0]),
                    node_coords(divisions, tri[1]),
                    node_coords(divisions, tri[2]),
                ];
                let area = 0.5 * h * h;
                let k = tri_stiffness(coords);
                for i in 0..3 {
                    for j in 0..3 {
                        let mv = area / 12.0 * if i == j { 2.0 } else { 1.0 };
                        mass_t.push((tri[i], tri[j], mv));
                        stiff_t.push((tri[i], tri[j], k[i][j]));
                    }
                }
            }
        }
    }

    // 1D boundary mass on the four sides
    let mut bmass_t = Vec::new();
    let mut edge = |a: usize, b: usize| {
        let w = h / 6.0;
        bmass_t.push((a, a, 2.0 * w));
        bmass_t.push((b, b, 2.0 * w));
        bmass_t.push((a, b, w));
        bmass_t.push((b, a, w));
    };
    for i in 0..divisions {
        edge(node(i, 0), node(i + 1, 0));
        edge(node(i, divisions), node(i + 1, divisions));
        edge(node(0, i), node(0, i + 1));
        edge(node(divisions, i), node(divisions, i + 1));
    }

    let mass = Csr::from_triplets(n, n, mass_t);
    let stiffness = Csr::from_triplets(n, n, stiff_t);
    let forward = stiffness.add(&mass);
    let boundary_mass = Csr::from_triplets(n, n, bmass_t);
    FemMatrices { mass, stiffness, forward, boundary_mass, h, divisions, n }
}
