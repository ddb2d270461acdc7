#![no_main]
use libfuzzer_sys::fuzz_target;
use momix::polyalg::{Field, Poly};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 256 {
        return;
    }
    let names: Vec<String> = ["x1", "x2", "x3"].iter().map(|v| v.to_string()).collect();
    for field in [Field::Rational, Field::Quadratic { d: 2 }] {
        if let Ok(p) = Poly::parse(s, &names, field) {
            // printing and reparsing is the identity
            let text = p.to_string_with(&names);
            let q = Poly::parse(&text, &names, field).expect("printed polynomial parses");
            assert_eq!(p, q, "{text}");
        }
    }
});
