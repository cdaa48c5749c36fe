use num_rational::BigRational;

use zhat::modular::{minimum_order, radial_extrapolate, three_star_pattern, wrt_radial, zhat_series};
use zhat::plumbing::PlumbingGraph;
use zhat::QSeries;

fn sigma237() -> PlumbingGraph {
    PlumbingGraph::from_weights(&[-1, -2, -3, -7], &[(0, 1), (0, 2), (0, 3)]).unwrap()
}

fn grid(dens: &[i64]) -> Vec<BigRational> {
    dens.iter().map(|&d| BigRational::new(1.into(), d.into())).collect()
}

fn theta_for(tmin: &BigRational) -> QSeries {
    let (m, c) = three_star_pattern(&sigma237()).unwrap();
    c.theta_series(m, minimum_order(tmin, 128, 1.0) + 1)
}

#[test]
fn error_estimate_shrinks_under_refinement() {
    let grids = [grid(&[100, 200, 400]), grid(&[200, 400, 800]), grid(&[400, 800, 1600]), grid(&[800, 1600, 3200])];
    let s = theta_for(grids.last().unwrap().last().unwrap());
    let errors: Vec<f64> = grids
        .iter()
        .map(|g| radial_extrapolate(&s, &BigRational::from_integer(0.into()), g, 128).unwrap().error_f64())
        .collect();
    for w in errors.windows(2) {
        assert!(w[1] < w[0], "{errors:?}");
    }
}

#[test]
fn wrt_radial_reuses_plain_extrapolation() {
    let g = sigma237();
    let tgrid = grid(&[50, 100, 200]);
    let w = wrt_radial(&g, 1, &tgrid, 128, 1).unwrap();
    let order = minimum_order(&tgrid[2], 128, 16.0) + 1;
    let s = zhat_series(&g, order, 1).unwrap();
    let r = radial_extrapolate(&s, &BigRational::from_integer(1.into()), &tgrid, 128).unwrap();
    assert_eq!(w.radial.to_json(), r.to_json());
    assert_eq!(w.x00, Some(BigRational::new(1.into(), 2.into())));
}

#[test]
fn disjoint_grids_agree_within_reported_error() {
    let a = grid(&[1000, 2000, 4000, 8000]);
    let b = grid(&[1500, 3000, 6000, 12000]);
    let s = theta_for(&b[3]);
    let x = BigRational::from_integer(1.into());
    let ra = radial_extrapolate(&s, &x, &a, 128).unwrap();
    let rb = radial_extrapolate(&s, &x, &b, 128).unwrap();
    let gap = ra.extrapolant.sub(&rb.extrapolant).abs().to_f64();
    assert!(gap <= ra.error_f64() + rb.error_f64(), "gap {gap}, errors {} {}", ra.error_f64(), rb.error_f64());
}
