#[path = "common/oracle.rs"]
mod oracle;

use oracle::{compare_products, phi_poly};

#[test]
fn phi_matches_known_values() {
    assert_eq!(phi_poly(1), vec![-1, 1]);
    assert_eq!(phi_poly(4), vec![1, 0, 1]);
    assert_eq!(phi_poly(12), vec![1, 0, -1, 0, 1]);
    assert_eq!(phi_poly(15), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
}

#[test]
fn products_match_long_division() {
    compare_products(500, 60, 20240601).unwrap();
}
