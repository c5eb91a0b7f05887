use faer::Mat;

pub fn smallest_eig_sym(n: usize) -> f64 {
    let a = Mat::<f64>::from_fn(n, n, |i, j| if i == j { i as f64 } else { 0.1 });
    let evd = a.self_adjoint_eigen(faer::Side::Lower).unwrap();
    let mut vals: Vec<f64> = (0..n).map(|i| evd.S()[i]).collect();
    vals.sort_by(f64::total_cmp);
    vals[0]
}
