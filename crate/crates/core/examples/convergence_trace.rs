//! Scaled-down design run: N = 64 with subcarriers 27..=38 nulled.

use ofdm_mismatch::altopt::run;
use ofdm_mismatch::numerics::vector::norm_sqr;
use ofdm_mismatch::waveform::{papr_of, to_db};
use ofdm_mismatch::{AltOptConfig64, SpectralMask};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let rho: f64 = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(1.25);
    let outer: usize = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(50);
    let n: usize = args.get(3).map(|s| s.parse()).transpose()?.unwrap_or(64);

    let null = if n == 512 { 209..=304 } else { 27..=38 };
    let mask = SpectralMask::from_null_ranges(n, &[null])?;
    let mut cfg = AltOptConfig64::new(mask, rho);
    cfg.outer_iters = outer;
    cfg.seed = 1;
    let t0 = std::time::Instant::now();
    let result = run(&cfg)?;
    println!(
        "init: pslr {:.2} dB, isl {:.4e}, papr {:.3}",
        to_db(result.initial.pslr),
        result.initial.isl,
        result.initial.papr
    );
    for p in &result.outer_trace {
        println!(
            "{:4} pslr {:8.3} dB (before filter {:8.3}) isl {:.4e} papr {:.3} resid {:.2e} inner {}",
            p.iteration,
            to_db(p.pslr),
            to_db(p.pslr_before_filter),
            p.isl,
            p.papr,
            p.primal_residual,
            p.inner_iterations
        );
    }
    let ymax = result.y.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
    println!(
        "max|y|^2 / P = {:.6}, papr(y) = {:.6}, |y|^2/N = {:.4e}, P = {:.4e}",
        ymax / cfg.avg_power,
        papr_of(&result.y)?,
        norm_sqr(&result.y) / n as f64,
        cfg.avg_power
    );
    println!("elapsed {:?}", t0.elapsed());
    Ok(())
}
