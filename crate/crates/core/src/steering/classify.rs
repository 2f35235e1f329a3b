use std::fmt;

/// Steering direction between two parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SteeringClass {
    TwoWay,
    OneWayForward,
    OneWayBackward,
    NoWay,
}

impl SteeringClass {
    pub fn label(self) -> &'static str {
        match self {
            SteeringClass::TwoWay => "two_way",
            SteeringClass::OneWayForward => "one_way_forward",
            SteeringClass::OneWayBackward => "one_way_backward",
            SteeringClass::NoWay => "no_way",
        }
    }
}

impl fmt::Display for SteeringClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Steering succeeds only for a radius strictly above 1.
pub fn classify<T: num_traits::Float>(r_forward: T, r_backward: T) -> SteeringClass {
    let one = T::one();
    match (r_forward > one, r_backward > one) {
        (true, true) => SteeringClass::TwoWay,
        (true, false) => SteeringClass::OneWayForward,
        (false, true) => SteeringClass::OneWayBackward,
        (false, false) => SteeringClass::NoWay,
    }
}
