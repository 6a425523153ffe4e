//! Quantum capacity of the erasure channel a lossy link turns into.

use symprot::dfs::capacity_curve;

fn main() {
    let one_way = capacity_curve(false);
    let two_way = capacity_curve(true);
    println!("{:>6} {:>8} {:>8}", "eps", "one-way", "two-way");
    for (a, b) in one_way.iter().zip(&two_way).step_by(10) {
        println!("{:>6.2} {:>8.3} {:>8.3}", a.epsilon, a.capacity, b.capacity);
    }
}
