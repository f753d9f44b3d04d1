use crate::error::{CoreError, Result};
use crate::instance::QapInstance;
use crate::matrix::Mat;
use qapforge_rng::SplitMix64;

/// Sample one instance: locations i.i.d. uniform on the unit square, then a
/// raw n-by-n uniform-[0,1] matrix added to its transpose with the diagonal
/// zeroed. Off-diagonal flows therefore lie in [0, 2] with mean 1.
///
/// Draw order is fixed (coordinates row by row, then the raw flow matrix row
/// by row) so a given generator state always produces the same instance.
pub fn generate_instance(rng: &mut SplitMix64, n: usize) -> Result<QapInstance> {
    if n < 2 {
        return Err(CoreError::InvalidInput(format!(
            "instance size must be at least 2, got {n}"
        )));
    }
    let mut coords = Vec::with_capacity(n);
    for _ in 0..n {
        let x = rng.next_f64();
        let y = rng.next_f64();
        coords.push([x, y]);
    }
    let mut raw = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            raw[(i, j)] = rng.next_f64();
        }
    }
    let mut flows = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                flows[(i, j)] = raw[(i, j)] + raw[(j, i)];
            }
        }
    }
    QapInstance::new(coords, flows)
}
