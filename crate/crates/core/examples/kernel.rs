//! Builds a few BDDs by hand: a majority function over three bits, its
//! quantifications and its models.

use sociable::kernel::Manager;

fn main() {
    let mut m = Manager::new();
    let bits: Vec<u32> = (0..3)
        .map(|i| m.add_bit_pair(&format!("b{i}"), 0).0)
        .collect();
    let [a, b, c] = [0, 1, 2].map(|i| m.mk_var(bits[i]).unwrap());

    let ab = m.and(a, b);
    let bc = m.and(b, c);
    let ac = m.and(a, c);
    let majority = m.or_all([ab, bc, ac]);

    let over = m.var_set(&bits).unwrap();
    println!(
        "majority: {} nodes, {} models",
        m.size(majority),
        m.sat_count(majority, &over).unwrap()
    );

    let only_a = m.var_set(&bits[..1]).unwrap();
    let some_a = m.exists(&only_a, majority);
    let every_a = m.forall(&only_a, majority);
    let b_or_c = m.or(b, c);
    assert_eq!(
        some_a, b_or_c,
        "canonical: equal functions are the same node"
    );
    assert_eq!(every_a, bc);
    println!("exists b0: b1 | b2; forall b0: b1 & b2");

    for cube in m.minterms(majority, &over).unwrap() {
        let row: Vec<&str> = cube.iter().map(|&v| if v { "1" } else { "0" }).collect();
        println!("  {}", row.join(" "));
    }
}
