//! Named images: `diamond`, `circle8`, `sphere:N`, `interval:N`, `cube:N:D`.

use crate::circle::{circle8, diamond, sphere};
use crate::error::{Error, Result};
use crate::lattice::{cube, interval, DigitalImage};

pub fn by_name(name: &str) -> Result<DigitalImage> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |s: &str| -> Result<u32> {
        s.parse().map_err(|_| Error::InvalidParameter(format!("`{s}` is not a non-negative integer")))
    };
    match parts.as_slice() {
        ["diamond"] => Ok(diamond()),
        ["circle8"] => Ok(circle8()),
        ["sphere", n] => sphere(num(n)? as usize),
        ["interval", n] => Ok(interval(num(n)?)),
        ["cube", n, d] => cube(num(n)?, num(d)? as usize),
        _ => Err(Error::InvalidParameter(format!(
            "unknown fixture `{name}`; expected diamond, circle8, sphere:N, interval:N or cube:N:D"
        ))),
    }
}
