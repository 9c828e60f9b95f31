use gauss_neumann::fem2d::{solve_neumann_2d, solve_pair, Opts2D};
use gauss_neumann::geometry::{Domain, Profile};
use gauss_neumann::thinlimit::{assemble_h_eps, reference_strip_mesh, solve_channel, RefStripOpts, SweepOpts, ThinMap};
use gauss_neumann::weights::WeightSpec;

fn main() {
    let w = WeightSpec::default();
    // Strip criterion: R >= 8, h <= 0.02 with extrapolation.
    let d = Domain::strip(0.0, 1.0).unwrap();
    for h in [0.04, 0.02] {
        let t0 = std::time::Instant::now();
        let opts = Opts2D { h, tail_tol: 1e-12, tol: 1e-10, n_layers: 0 };
        let (spec, mesh, _) = solve_neumann_2d(&w, &d, 2, &opts).unwrap();
        println!("strip h={h}: mu1 = {:.8} (n={} R={:?}) in {:?}", spec.eigenvalues[1], mesh.vertices.len(), mesh.trunc_radius, t0.elapsed());
    }
    // Unitary equivalence at eps = 0.2 and 0.1.
    for eps in [0.2, 0.1] {
        let p = Profile::linear(1.0).unwrap();
        let sopts = SweepOpts { h: 0.02, n_layers: 6, tail_tol: 1e-10, tol: 1e-9, h_1d: 0.005 };
        let (phys, _, _, _) = solve_channel(&w, &p, eps, 2, &sopts).unwrap();
        let map = ThinMap::new(p, eps).unwrap();
        let ropts = RefStripOpts { h: 0.02, n_layers: 6, delta_cut: 1e-3, tail_tol: 1e-10 };
        let mesh = reference_strip_mesh(&map, &w, &ropts).unwrap();
        let pair = assemble_h_eps(&w, &map, &mesh).unwrap();
        let href = solve_pair(&pair, &mesh, 2, 1e-9).unwrap();
        for n in 1..=2 {
            let (a, b) = (phys.eigenvalues[n], href.eigenvalues[n]);
            println!("eps={eps} n={n}: phys {a:.6} vs href {b:.6} rel {:.2e}", (a-b).abs()/b);
        }
    }
}
