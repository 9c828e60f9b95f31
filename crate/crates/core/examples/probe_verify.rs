use gauss_neumann::geometry::Domain;
use gauss_neumann::verify::*;
use gauss_neumann::weights::WeightSpec;

fn main() {
    let w = WeightSpec::default();
    let t0 = std::time::Instant::now();
    // Split experiment on Strip(0,1).
    let d = Domain::strip(0.0, 1.0).unwrap();
    let opts = VerifyOpts { h: 0.04, tail_tol: 1e-12, tol: 1e-9 };
    let rep = split_experiment(&w, &d, &opts).unwrap();
    println!("split: alpha*={:.6} offset={:.6} I={:.3e} l1={:.4} defect={:.3e} (total {:.4})",
        rep.alpha_star, rep.offset, rep.half_integral, rep.l1_norm, rep.equal_area_defect, rep.total_measure);
    println!("  mu1={:.8} halves mu1=({:.6},{:.6}) quotients=({:.8},{:.8}) pass={}",
        rep.mu1_whole, rep.mu1_half1, rep.mu1_half2, rep.rayleigh_half1, rep.rayleigh_half2, rep.pass);
    println!("  bracket: ({:.4},{:.3e}) ({:.4},{:.3e})", rep.bracket.alpha_lo, rep.bracket.i_lo, rep.bracket.alpha_hi, rep.bracket.i_hi);
    println!("split took {:?}", t0.elapsed());

    // Strictness scan.
    let t1 = std::time::Instant::now();
    let scan = strictness_scan(&w, &[0.0, 0.25, 0.5, 1.0], &VerifyOpts { h: 0.05, tail_tol: 1e-10, tol: 1e-9 }).unwrap();
    for p in &scan {
        println!("kappa={}: mu1={:.6} margin={:.3e} tol={:.1e}", p.kappa, p.mu1, p.margin, p.tol);
    }
    println!("scan took {:?}", t1.elapsed());
}
