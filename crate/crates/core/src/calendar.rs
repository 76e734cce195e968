//! Proleptic Gregorian calendar dates with year, month, or day precision,
//! and their mapping onto the Rata Die day count (day 1 = 0001-01-01).

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use thiserror::Error;

/// Years a corpus article may be dated in.
pub const YEAR_DOMAIN: RangeInclusive<i32> = 500..=2100;

/// Years the calendar arithmetic itself accepts.
pub const CALENDAR_YEARS: RangeInclusive<i32> = 1..=9999;

/// Rata Die of 1970-01-01.
const UNIX_EPOCH_RATA_DIE: i64 = 719_163;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DateError {
    #[error("year {0} outside the supported calendar range 1..=9999")]
    YearOutOfRange(i64),
    #[error("month {0} out of range 1-12")]
    MonthOutOfRange(i64),
    #[error("day given without month")]
    DayWithoutMonth,
    #[error("invalid calendar date")]
    InvalidCalendarDate,
    #[error("malformed date `{0}`, expected YYYY-MM-DD")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Year,
    Month,
    Day,
}

/// A calendar date known to year, month, or day precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HistoricalDate {
    year: i32,
    month: Option<u8>,
    day: Option<u8>,
}

pub fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap_year(year) => 29,
        2 => 28,
        _ => 0,
    }
}

/// Rata Die of a valid proleptic Gregorian date.
///
/// Counts from a March-based year so the leap day falls at the end of the
/// computational year, then shifts from the Unix epoch onto Rata Die.
pub fn rata_die(year: i32, month: u8, day: u8) -> i64 {
    let (year, month, day) = (i64::from(year), i64::from(month), i64::from(day));
    let y = if month <= 2 { year - 1 } else { year };
    let era = y.div_euclid(400);
    let year_of_era = y - era * 400;
    let march_month = (month + 9) % 12;
    let day_of_year = (153 * march_month + 2) / 5 + day - 1;
    let day_of_era = year_of_era * 365 + year_of_era / 4 - year_of_era / 100 + day_of_year;
    era * 146_097 + day_of_era - 719_468 + UNIX_EPOCH_RATA_DIE
}

/// Inverse of [`rata_die`]: `(year, month, day)` for a day count.
pub fn civil_from_rata_die(ordinal: i64) -> (i32, u8, u8) {
    let z = ordinal - UNIX_EPOCH_RATA_DIE + 719_468;
    let era = z.div_euclid(146_097);
    let day_of_era = z - era * 146_097;
    let year_of_era =
        (day_of_era - day_of_era / 1460 + day_of_era / 36_524 - day_of_era / 146_096) / 365;
    let day_of_year = day_of_era - (365 * year_of_era + year_of_era / 4 - year_of_era / 100);
    let march_month = (5 * day_of_year + 2) / 153;
    let day = day_of_year - (153 * march_month + 2) / 5 + 1;
    let month = if march_month < 10 {
        march_month + 3
    } else {
        march_month - 9
    };
    let year = year_of_era + era * 400 + i64::from(month <= 2);
    (year as i32, month as u8, day as u8)
}

impl HistoricalDate {
    /// Builds a date, checking calendar validity (not the corpus year domain).
    pub fn new(year: i64, month: Option<i64>, day: Option<i64>) -> Result<Self, DateError> {
        if !(i64::from(*CALENDAR_YEARS.start())..=i64::from(*CALENDAR_YEARS.end())).contains(&year)
        {
            return Err(DateError::YearOutOfRange(year));
        }
        let year = year as i32;
        let month = match month {
            Some(m) if (1..=12).contains(&m) => Some(m as u8),
            Some(m) => return Err(DateError::MonthOutOfRange(m)),
            None => None,
        };
        let day = match (month, day) {
            (_, None) => None,
            (None, Some(_)) => return Err(DateError::DayWithoutMonth),
            (Some(m), Some(d)) => {
                if d < 1 || d > i64::from(days_in_month(year, m)) {
                    return Err(DateError::InvalidCalendarDate);
                }
                Some(d as u8)
            }
        };
        Ok(HistoricalDate { year, month, day })
    }

    pub fn year_only(year: i64) -> Result<Self, DateError> {
        Self::new(year, None, None)
    }

    pub fn ymd(year: i64, month: i64, day: i64) -> Result<Self, DateError> {
        Self::new(year, Some(month), Some(day))
    }

    /// The day-precision date for a Rata Die day count.
    pub fn from_rata_die(ordinal: i64) -> Result<Self, DateError> {
        let (y, m, d) = civil_from_rata_die(ordinal);
        Self::ymd(i64::from(y), i64::from(m), i64::from(d))
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> Option<u8> {
        self.month
    }

    pub fn day(&self) -> Option<u8> {
        self.day
    }

    pub fn precision(&self) -> Precision {
        match (self.month, self.day) {
            (Some(_), Some(_)) => Precision::Day,
            (Some(_), None) => Precision::Month,
            _ => Precision::Year,
        }
    }

    pub fn in_year_domain(&self) -> bool {
        YEAR_DOMAIN.contains(&self.year)
    }

    /// `(month, day)` when the date is known to the day.
    pub fn month_day(&self) -> Option<(u8, u8)> {
        self.month.zip(self.day)
    }

    /// First Rata Die day the date may denote.
    pub fn first_day(&self) -> i64 {
        rata_die(self.year, self.month.unwrap_or(1), self.day.unwrap_or(1))
    }

    /// Last Rata Die day the date may denote.
    pub fn last_day(&self) -> i64 {
        match (self.month, self.day) {
            (Some(m), Some(d)) => rata_die(self.year, m, d),
            (Some(m), None) => rata_die(self.year, m, days_in_month(self.year, m)),
            _ => rata_die(self.year, 12, 31),
        }
    }
}

impl fmt::Display for HistoricalDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}", self.year)?;
        if let Some(m) = self.month {
            write!(f, "-{m:02}")?;
        }
        if let Some(d) = self.day {
            write!(f, "-{d:02}")?;
        }
        Ok(())
    }
}

/// Parses a strict `YYYY-MM-DD` day-precision date.
impl FromStr for HistoricalDate {
    type Err = DateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || DateError::Malformed(s.to_string());
        let bytes = s.as_bytes();
        if bytes.len() != 10 || bytes[4] != b'-' || bytes[7] != b'-' {
            return Err(malformed());
        }
        let field = |range: std::ops::Range<usize>| -> Result<i64, DateError> {
            let part = &s[range];
            if !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            part.parse().map_err(|_| malformed())
        };
        Self::ymd(field(0..4)?, field(5..7)?, field(8..10)?)
    }
}
