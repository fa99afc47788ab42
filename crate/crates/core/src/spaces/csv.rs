use std::io::{BufRead, Write};

use num_complex::Complex;

use super::{Coordinates, GridFunction, SpaceDescriptor};
use crate::error::{contract, Error, Result};
use crate::real::Real;

/// Writes `x,re,im` rows, one per node, with 17 significant digits.
///
/// The `x` column holds the nodes of the function's own coordinate.
pub fn write_csv<T: Real, W: Write>(f: &GridFunction<T>, mut out: W) -> Result<()> {
    writeln!(out, "x,re,im")?;
    let values = f.values();
    for (x, v) in f.nodes().iter().zip(values.iter()) {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", x, v.re, v.im)?;
    }
    Ok(())
}

fn parse<T: Real>(field: &str, line: usize) -> Result<T> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Io(format!("line {line}: cannot parse {field:?}")))?;
    Ok(T::lit(v))
}

/// Reads a function written by [`write_csv`], checking its nodes against `desc`.
pub fn read_csv<T: Real, R: BufRead>(desc: &SpaceDescriptor<T>, coords: Coordinates, input: R) -> Result<GridFunction<T>> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Io("empty input".into()))??;
    if header.trim() != "x,re,im" {
        return Err(Error::Io(format!("unexpected header {header:?}")));
    }
    let expected = match coords {
        Coordinates::Conformable => desc.grid().x(),
        Coordinates::Transformed => desc.grid().xi(),
    };
    let mut values = Vec::with_capacity(expected.len());
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Io(format!("line {}: expected 3 fields", k + 2)));
        }
        let x: T = parse(fields[0], k + 2)?;
        let i = values.len();
        let node = *expected.get(i).ok_or_else(|| contract("more rows than grid nodes"))?;
        if (x - node).abs() > T::lit(4.0) * T::epsilon() * node {
            return Err(contract(format!("row {} has x = {x}, grid node is {node}", i + 1)));
        }
        values.push(Complex::new(parse(fields[1], k + 2)?, parse(fields[2], k + 2)?));
    }
    GridFunction::from_values(desc, coords, values)
}
