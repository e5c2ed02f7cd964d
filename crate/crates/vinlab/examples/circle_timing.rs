use std::time::Instant;

fn main() {
    let t = Instant::now();
    let series = vinlab::singular_series(7, 2, 50).unwrap();
    println!("series = {} ({:?})", series.value, t.elapsed());
    let t = Instant::now();
    let integral = vinlab::singular_integral(7, 2, 50.0, 8).unwrap();
    println!(
        "integral = {} tail = {} panels = {} ({:?})",
        integral.value,
        integral.tail,
        integral.panels,
        t.elapsed()
    );
    let product = series.value * integral.value;
    println!("product = {product}");
    // Frozen counts from the dense engine.
    let j256: f64 = 332101879967667079383713884f64;
    let j512: f64 = 680119780306364243250288910580f64;
    println!("ratio256 = {}", j256 / 256f64.powi(11));
    println!("ratio512 = {}", j512 / 512f64.powi(11));
}
