//! Fits a one-class SVM to a 2-D Gaussian cloud and shows how nu bounds the
//! fraction of training outliers and support vectors.
//!
//! cargo run --release --example ocsvm_gaussian

use zero_boundary::numeric::{Matrix, RngStream};
use zero_boundary::ocsvm::{KernelParams, OcsvmModel};

fn gaussian(rng: &mut RngStream) -> f64 {
    let u1 = rng.uniform_f64().max(f64::MIN_POSITIVE);
    let u2 = rng.uniform_f64();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn main() -> zero_boundary::Result<()> {
    let mut rng = RngStream::new(3);
    let rows: Vec<[f64; 2]> = (0..500)
        .map(|_| [gaussian(&mut rng), gaussian(&mut rng)])
        .collect();
    let points = Matrix::from_rows(&rows)?;

    // points on the boundary land within the solver tolerance of zero, on either side
    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>8}",
        "nu", "below 0", "below -1e-3", "support", "rho"
    );
    for nu in [0.01, 0.05, 0.1, 0.25, 0.5] {
        let model = OcsvmModel::train(&points, nu, KernelParams::for_dimension(2)?)?;
        let below =
            |t: f64| rows.iter().filter(|p| model.decision(&p[..]) < t).count() as f64 / 500.0;
        println!(
            "{nu:>6} {:>9.3} {:>11.3} {:>9.3} {:>8.4}",
            below(0.0),
            below(-1e-3),
            model.alphas().len() as f64 / 500.0,
            model.rho()
        );
    }

    let model = OcsvmModel::train(&points, 0.05, KernelParams::for_dimension(2)?)?;
    for probe in [[0.0, 0.0], [1.5, -1.0], [3.0, 3.0], [8.0, 0.0]] {
        println!("decision at {probe:?}: {:+.4}", model.decision(&probe));
    }
    Ok(())
}
