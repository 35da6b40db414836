use std::sync::Arc;

use hyperbargmann::grids::{make_direction_grid, sample, sample_sino, BoxGrid, Parity, TAxis};
use hyperbargmann::io::{read_grid_binary, read_sinogram_binary, write_grid_binary, write_sinogram_binary, write_sinogram_csv};
use hyperbargmann::Error;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sinogram_binary_round_trip(n in 2usize..4, half in 2usize..5, a in -3.0..3.0f64, b in -3.0..3.0f64, code in 0u8..3) {
        let dirs = Arc::new(make_direction_grid(n, 2 * half).unwrap());
        let t = TAxis::symmetric(2.0, 0.25).unwrap();
        let parity = Parity::from_code(code).unwrap();
        let s = sample_sino(|w, t| Complex64::new(a * w[0] * t, b * (t * t + w[n - 1])), dirs, t, parity).unwrap();
        let mut buf = Vec::new();
        write_sinogram_binary(&s, &mut buf).unwrap();
        let back = read_sinogram_binary(buf.as_slice()).unwrap();
        prop_assert_eq!(&back.values, &s.values);
        prop_assert_eq!(back.parity, s.parity);
        prop_assert_eq!(back.t, s.t);
        prop_assert_eq!(&back.dirs.directions, &s.dirs.directions);
    }

    #[test]
    fn grid_binary_round_trip(n in 1usize..4, count in 2usize..7, a in -3.0..3.0f64) {
        let grid = BoxGrid::centered(n, 1.5, count).unwrap();
        let u = sample(|y| Complex64::new(a * y[0], y.iter().sum::<f64>()), &grid).unwrap();
        let mut buf = Vec::new();
        write_grid_binary(&u, &mut buf).unwrap();
        let back = read_grid_binary(buf.as_slice()).unwrap();
        prop_assert_eq!(back, u);
    }
}

#[test]
fn truncated_and_foreign_input_is_rejected() {
    let dirs = Arc::new(make_direction_grid(2, 4).unwrap());
    let s = sample_sino(|_, t| Complex64::new(t, 0.0), dirs, TAxis::symmetric(1.0, 0.5).unwrap(), Parity::Odd).unwrap();
    let mut buf = Vec::new();
    write_sinogram_binary(&s, &mut buf).unwrap();
    assert!(read_sinogram_binary(&buf[..buf.len() - 3]).is_err());
    assert!(read_sinogram_binary(&b"not a sinogram"[..]).is_err());
    let mut grid = Vec::new();
    write_grid_binary(&sample(|y| Complex64::new(y[0], 0.0), &BoxGrid::centered(1, 1.0, 3).unwrap()).unwrap(), &mut grid)
        .unwrap();
    assert!(matches!(read_sinogram_binary(grid.as_slice()), Err(Error::Format(_)) | Err(Error::Io(_))));
}

#[test]
fn sinogram_csv_has_one_row_per_sample() {
    let dirs = Arc::new(make_direction_grid(2, 6).unwrap());
    let t = TAxis::symmetric(1.0, 0.5).unwrap();
    let s = sample_sino(|w, t| Complex64::new(w[0] + t, 0.0), dirs, t, Parity::EvenP).unwrap();
    let mut buf = Vec::new();
    write_sinogram_csv(&s, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 1 + s.values.len());
}
