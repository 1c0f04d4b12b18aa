#![allow(dead_code)]

pub mod criteria;
pub mod replay;
pub mod straight_line;
