//! Parses a module written by hand, prints it in canonical form and parses
//! the output again. Also shows what a syntax error looks like.

use sociable::syntax::{parse, parse_file, pretty_print_all};

const SOURCE: &str = "
module Counter:   // counts pulses up to three
  var n: [0..3]
  global var pulse: bool
  input tick { pulse' ==> n' := n+1; }
  output reset { (n = 3) ==> n' := 0, pulse' := false; }
  init: n=0 & !pulse
";

fn main() {
    let modules = parse(SOURCE).expect("valid source");
    let printed = pretty_print_all(&modules);
    print!("{printed}");

    let again = parse(&printed).expect("printed source parses");
    assert!(modules[0].same_structure(&again[0]));
    assert_eq!(pretty_print_all(&again), printed);
    println!("round trip preserves the tree");

    let broken = "module M:\n  var x: bool\n  output a { x = ==> }\n  init: x\n";
    if let Err(e) = parse_file(broken, "broken.si") {
        println!("{e}");
    }
}
