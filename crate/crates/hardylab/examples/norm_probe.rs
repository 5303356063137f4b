use hardylab::intertwine::toeplitz_norm;
use hardylab::symbol::SymbolSpec;
use std::time::Instant;

fn main() {
    for n in [256usize, 512] {
        let s = SymbolSpec::cardioid().to_series(n).unwrap();
        let t = Instant::now();
        let est = toeplitz_norm(&s, n);
        println!(
            "N={n}: norm={:.6} converged={} iters={} in {:.2}s",
            est.value,
            est.converged,
            est.iterations,
            t.elapsed().as_secs_f64()
        );
    }
}
