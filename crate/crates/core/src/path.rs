use serde::{Deserialize, Serialize};

/// Arithmetic actually used for a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithPath {
    Exact,
    Floating,
}

/// Arithmetic requested by a caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathRequest {
    Exact,
    Float,
    #[default]
    Auto,
}

impl std::str::FromStr for PathRequest {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(PathRequest::Exact),
            "float" | "floating" => Ok(PathRequest::Float),
            "auto" => Ok(PathRequest::Auto),
            other => Err(format!("unknown path '{other}', expected exact, float or auto")),
        }
    }
}
