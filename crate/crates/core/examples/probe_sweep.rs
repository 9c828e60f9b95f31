use gauss_neumann::geometry::Profile;
use gauss_neumann::thinlimit::{sweep, SweepOpts};
use gauss_neumann::weights::WeightSpec;

fn main() {
    let w = WeightSpec::default();
    let p = Profile::linear(1.0).unwrap();
    let opts = SweepOpts { h: 0.02, n_layers: 6, tail_tol: 1e-10, tol: 1e-9, h_1d: 0.005 };
    let t0 = std::time::Instant::now();
    let rep = sweep(&w, &p, &[0.4, 0.2, 0.1, 0.05], 2, &opts).unwrap();
    println!("time {:?}", t0.elapsed());
    println!("nu = {:?}", rep.nu);
    println!("C  = {:?}", rep.c);
    for (i, &eps) in rep.eps_list.iter().enumerate() {
        println!("eps={eps}: mu1={:.6} mu2={:.6} defect1={:.4e} defect2={:.4e}",
            rep.mu(i,1), rep.mu(i,2), rep.defect(i,1), rep.defect(i,2));
    }
    println!("extrapolated = {:?}", rep.extrapolated);
    println!("monotone = {:?}", rep.monotone_approach);
    println!("defect slopes: {:.3} {:.3}", rep.defect_slope(1), rep.defect_slope(2));
}
