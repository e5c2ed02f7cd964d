use std::time::Instant;
use vinlab::counting::dense::mean_value_quadratic;
use vinlab::Budget;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let s: u32 = args[1].parse().unwrap();
    let x: u64 = args[2].parse().unwrap();
    let t = Instant::now();
    let j = mean_value_quadratic(s, x, Budget::default()).unwrap();
    println!("J_{{{s},2}}({x}) = {j}  in {:.2?}", t.elapsed());
}
