//! Parameter specification grammar for the command line.
//!
//! `c:<lo>/<hi>` center by root pair (e.g. `c:1/3/2/3`), `c:<a>` center with
//! the conjugate angle computed, `m:<a>` Misiurewicz point, plus the named
//! aliases `airplane`, `basilica`, `rabbit`, `corabbit`, `kokopelli`,
//! `quarter`.

use std::str::FromStr;

use mating_core::params::RootPair;
use mating_core::{Angle, Error, ParameterSpec};

pub fn parse_parameter(s: &str) -> Result<ParameterSpec, Error> {
    match s {
        "airplane" => return Ok(ParameterSpec::airplane()),
        "basilica" => return Ok(ParameterSpec::basilica()),
        "rabbit" => return Ok(ParameterSpec::rabbit()),
        "corabbit" => return Ok(ParameterSpec::corabbit()),
        "kokopelli" => return Ok(ParameterSpec::kokopelli()),
        "quarter" => return Ok(ParameterSpec::quarter()),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("c:") {
        let parts: Vec<&str> = rest.split('/').collect();
        return match parts.len() {
            2 => {
                let a = Angle::from_str(rest)?;
                ParameterSpec::center_of_angle(&a)
            }
            4 => {
                let lo = Angle::from_str(&format!("{}/{}", parts[0], parts[1]))?;
                let hi = Angle::from_str(&format!("{}/{}", parts[2], parts[3]))?;
                let root = RootPair::of_angle(&lo)?;
                if root.hi() != hi {
                    return Err(Error::Parse(format!(
                        "{lo} pairs with {}, not {hi}",
                        root.hi()
                    )));
                }
                Ok(ParameterSpec::Center(root))
            }
            _ => Err(Error::Parse(format!("bad center spec {s:?}"))),
        };
    }
    if let Some(rest) = s.strip_prefix("m:") {
        let a = Angle::from_str(rest)?;
        return ParameterSpec::misiurewicz(&a);
    }
    Err(Error::Parse(format!(
        "unknown parameter spec {s:?}; use c:<lo>/<hi>, c:<a>, m:<a> or a named alias"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(parse_parameter("basilica").unwrap(), parse_parameter("c:1/3/2/3").unwrap());
        assert_eq!(parse_parameter("c:1/3").unwrap(), parse_parameter("basilica").unwrap());
        assert_eq!(parse_parameter("airplane").unwrap(), parse_parameter("c:3/7/4/7").unwrap());
        assert!(parse_parameter("m:1/3").is_err());
        assert!(parse_parameter("c:1/3/1/2").is_err());
        assert!(parse_parameter("nope").is_err());
        assert!(matches!(parse_parameter("m:19/62").unwrap(), ParameterSpec::Misiurewicz(_)));
    }
}
