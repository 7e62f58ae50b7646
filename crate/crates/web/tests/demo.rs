use schur_web::{block_census_json, coefficient_json, schur_resources_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn coefficients() {
    let cg = parse(coefficient_json("cg", "1/2, 1/2, 1/2, -1/2, 1, 0").unwrap());
    assert_eq!(cg["exact"], "1*sqrt(1/2)");
    let zero = parse(coefficient_json("cg", "1/2 1/2 1/2 1/2 1 0").unwrap());
    assert_eq!(zero["sign"], 0);
    let six = parse(coefficient_json("6j", "1/2,1/2,0,1/2,1/2,1").unwrap());
    assert_eq!(six["square"], "1/4");
    assert!(coefficient_json("cg", "1/2").is_err());
    assert!(coefficient_json("9j", "1,1,1,1,1,1").is_err());
    assert!(coefficient_json("cg", "1/3,0,0,0,0,0").is_err());
}

#[test]
fn resources() {
    let r = parse(schur_resources_json(6).unwrap());
    assert_eq!(r["original"]["formula"], r["original"]["measured"]);
    assert_eq!(r["modified"]["formula"], r["modified"]["measured"]);
    assert_eq!(r["original"]["formula"], 11);
    let steps = r["steps"].as_array().unwrap();
    assert!(steps.iter().all(|s| s["two_level"].as_u64() <= s["bound"].as_u64()));
    assert!(schur_resources_json(11).is_err());
}

#[test]
fn census() {
    let c = parse(block_census_json(6, "3,4; 2,3,4; 1,2,3,4; 5,6; 1,2,3,4,5,6", "Q").unwrap());
    let pairs: Vec<(u64, u64)> = c["census"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["size"].as_u64().unwrap(), e["count"].as_u64().unwrap()))
        .collect();
    assert_eq!(pairs, [(7, 1), (5, 5), (3, 9), (1, 5)]);
    assert!(block_census_json(6, "3,4; 2,3,4; 1,2,3,4; 5,6; 1,2,3,4,5,6", "subgroup:1,2,3,4").is_ok());
    assert!(block_census_json(3, "1,2; 1,2", "P").is_err());
    assert!(block_census_json(2, "1,2", "R").is_err());
}
