pub mod asymptotics;
pub mod crosscheck;
pub mod cusick;
pub mod genfun;
pub mod verify_tudeng;
