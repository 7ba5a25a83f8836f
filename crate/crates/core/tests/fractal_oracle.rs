mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use restricted_digits::fractal::{axis_hits, box_count_product, box_count_slice, slice_cover, PlaneSpec};
use restricted_digits::DigitSetSpec;

fn spec(b: u32) -> DigitSetSpec {
    DigitSetSpec::binary(b).unwrap()
}

fn q(a: i128, b: i128) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

const SETS: [[u64; 3]; 2] = [[3, 4, 5], [7, 11, 13]];

fn scales() -> Vec<(i128, i128)> {
    let mut out: Vec<(i128, i128)> = (1..=256).map(|m| (1, m)).collect();
    out.extend([(2, 5), (3, 7), (3, 8), (5, 64), (7, 100)]);
    out
}

#[test]
fn axis_hits_match_cylinder_walk() {
    for p in [3u64, 4, 5, 7, 11, 13] {
        for (rn, rd) in scales() {
            let got = axis_hits(&spec(p as u32), &q(rn, rd)).unwrap();
            assert_eq!(got, common::axis_hits_oracle(p, rn, rd), "A_{p} at r={rn}/{rd}");
        }
    }
}

#[test]
fn slice_counts_match_corner_scan() {
    let plane = PlaneSpec::from_ints([1, 1, -1, 0]).unwrap();
    for bases in SETS {
        let s = bases.map(|b| spec(b as u32));
        for (rn, rd) in scales() {
            let r = q(rn, rd);
            let expected = common::slice_oracle(bases, [1, 1, -1, 0], rn, rd);
            let got = box_count_slice(&plane, [&s[0], &s[1], &s[2]], &r).unwrap();
            assert_eq!(got.count, expected.len() as u128, "{bases:?} r={r}");
            let product = box_count_product([&s[0], &s[1], &s[2]], &r).unwrap();
            let axis: u128 = bases
                .iter()
                .map(|&p| common::axis_hits_oracle(p, rn, rd).len() as u128)
                .product();
            assert_eq!(product.count, axis);
        }
    }
}

#[test]
fn dyadic_cover_cells_match_corner_scan() {
    for bases in SETS {
        let s = bases.map(|b| spec(b as u32));
        for plane in [[1i64, 1, -1, 0], [2, -1, 1, 1], [1, 3, -2, 0]] {
            let ps = PlaneSpec::from_ints(plane).unwrap();
            let (cells, per_depth) = slice_cover(&ps, [&s[0], &s[1], &s[2]], 8).unwrap();
            let expected: Vec<[u64; 3]> = common::slice_oracle(bases, plane.map(|c| c as i128), 1, 256)
                .into_iter()
                .collect();
            assert_eq!(cells, expected, "{bases:?} {plane:?}");
            for d in &per_depth {
                let e = common::slice_oracle(bases, plane.map(|c| c as i128), 1, 1 << d.depth);
                assert_eq!(d.count, e.len() as u128, "{bases:?} {plane:?} depth {}", d.depth);
            }
        }
    }
}

#[test]
fn half_open_boundary_example() {
    let s = [spec(3), spec(4), spec(5)];
    let (cells, _) = slice_cover(&PlaneSpec::sum_plane(), [&s[0], &s[1], &s[2]], 1).unwrap();
    // 1/2 = 0.111..._3 belongs to A_3 and falls in the upper x-cell.
    assert_eq!(cells, vec![[0, 0, 0], [1, 0, 0]]);
    assert_eq!(common::axis_hits_oracle(3, 1, 2), vec![0, 1]);
}
