//! Frozen reference coefficients for the Suzuki formulas of order 1, 2, 4, 6.

use std::time::Instant;
use trotter_core::{derive_bound, suzuki_times, Alg, ProductFormula};

/// Agreement to six significant digits: relative error at most 5e-6.
fn six_digits(x: f64, printed: f64) -> bool {
    ((x - printed) / printed).abs() <= 5e-6
}

const P4: [(&str, f64); 12] = [
    ("aaaaa", 0.00427803),
    ("aabaa", 0.00950917),
    ("aabbb", 0.00633945),
    ("abaaa", 0.0243899),
    ("abbaa", 0.0731697),
    ("abbbb", 0.0487798),
    ("baaaa", 0.0299684),
    ("babaa", 0.092188),
    ("babbb", 0.0614587),
    ("bbaaa", 0.212061),
    ("bbbaa", 0.393394),
    ("bbbbb", 0.22989),
];

const P6: [(&str, f64); 48] = [
    ("aaaaaaa", 0.000342245),
    ("aaaabaa", 0.00466073),
    ("aaaabbb", 0.00310716),
    ("aaabaaa", 0.0128515),
    ("aaabbaa", 0.0385546),
    ("aaabbbb", 0.0257031),
    ("aabaaaa", 0.0128622),
    ("aababaa", 0.0417926),
    ("aababbb", 0.0278617),
    ("aabbaaa", 0.0164871),
    ("aabbbaa", 0.0382987),
    ("aabbbbb", 0.0240441),
    ("abaaaaa", 0.00717357),
    ("abaabaa", 0.0241779),
    ("abaabbb", 0.0161186),
    ("ababaaa", 0.0620135),
    ("ababbaa", 0.18604),
    ("ababbbb", 0.124027),
    ("abbaaaa", 0.0213565),
    ("abbabaa", 0.234396),
    ("abbabbb", 0.156264),
    ("abbbaaa", 0.168267),
    ("abbbbaa", 0.205275),
    ("abbbbbb", 0.0969135),
    ("baaaaaa", 0.00379873),
    ("baaabaa", 0.0501259),
    ("baaabbb", 0.0334173),
    ("baabaaa", 0.137266),
    ("baabbaa", 0.411798),
    ("baabbbb", 0.274532),
    ("babaaaa", 0.127458),
    ("bababaa", 0.420193),
    ("bababbb", 0.280128),
    ("babbaaa", 0.290088),
    ("babbbaa", 0.467689),
    ("babbbbb", 0.258116),
    ("bbaaaaa", 0.0631099),
    ("bbaabaa", 0.141983),
    ("bbaabbb", 0.0946554),
    ("bbabaaa", 0.36417),
    ("bbabbaa", 1.09251),
    ("bbabbbb", 0.72834),
    ("bbbaaaa", 0.0509254),
    ("bbbabaa", 1.05772),
    ("bbbabbb", 0.705143),
    ("bbbbaaa", 0.67482),
    ("bbbbbaa", 0.679037),
    ("bbbbbbb", 0.281524),
];

#[test]
fn first_order_matches_listing() {
    let be = derive_bound(&ProductFormula::first_order(), true).unwrap();
    let words: Vec<String> = be.terms.keys().map(|w| w.to_string()).collect();
    assert_eq!(words, ["aa", "bb"]);
    assert!(be.terms.values().all(|c| *c == Alg::frac(1, 2)));
}

#[test]
fn fourth_order_floats_and_closed_forms() {
    let start = Instant::now();
    let be = derive_bound(&suzuki_times(4).unwrap(), true).unwrap();
    assert!(start.elapsed().as_secs_f64() < 10.0);
    assert_eq!(be.terms.len(), 12);
    for (w, v) in P4 {
        let c = be.coefficient(w).unwrap_or_else(|| panic!("missing {w}"));
        assert!(six_digits(c.to_f64(), v), "{w}: {} vs {v}", c.to_f64());
    }
    let c = Alg::root2(3);
    let c2 = c.pow(2);
    let lin = |a: i64, b: i64, d: i64| &(&Alg::from_int(a) + &(&c * &Alg::from_int(b))) + &(&c2 * &Alg::from_int(d));
    let a5 = &(&Alg::one() + &c) / &(&Alg::from_int(2) - &c).pow(5);
    let closed = [
        ("aaaaa", lin(23, 19, 17), 17280),
        ("aabaa", lin(4, 3, 2), 1152),
        ("aabbb", lin(4, 3, 2), 1728),
        ("abaaa", lin(14, 11, 9), 1728),
        ("abbaa", lin(14, 11, 9), 576),
        ("abbbb", lin(14, 11, 9), 864),
        ("baaaa", lin(68, 55, 44), 6912),
        ("babaa", lin(18, 14, 11), 576),
        ("babbb", lin(18, 14, 11), 864),
        ("bbaaa", a5, 48),
        ("bbbaa", lin(226, 180, 143), 1728),
        ("bbbbb", lin(330, 263, 209), 4320),
    ];
    for (w, a, den) in closed {
        let expect = &a / &Alg::from_int(den);
        assert_eq!(be.coefficient(w), Some(&expect), "closed form of {w}");
    }
}

#[test]
fn sixth_order_matches_listing() {
    let start = Instant::now();
    let be = derive_bound(&suzuki_times(6).unwrap(), true).unwrap();
    assert!(start.elapsed().as_secs_f64() < 60.0);
    assert_eq!(be.terms.len(), 48);
    for (w, v) in P6 {
        let c = be.coefficient(w).unwrap_or_else(|| panic!("missing {w}"));
        assert!(six_digits(c.to_f64(), v), "{w}: {} vs {v}", c.to_f64());
    }
}
