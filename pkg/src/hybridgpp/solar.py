"""Low-precision solar position (Astronomical Almanac series, Michalsky 1988).

Declination and right ascension come from the mean longitude and anomaly
of the sun; the hour angle from Greenwich mean sidereal time.  Accuracy is
about 0.01 deg in declination for 1950-2050.
"""
import math
from datetime import datetime, timezone

J2000 = datetime(2000, 1, 1, 12, tzinfo=timezone.utc)


def _days_since_j2000(timestamp):
    if timestamp.tzinfo is None:
        timestamp = timestamp.replace(tzinfo=timezone.utc)
    return (timestamp - J2000).total_seconds() / 86400.0


def solar_declination_ra(timestamp):
    """Declination and right ascension of the sun in degrees."""
    n = _days_since_j2000(timestamp)
    mean_lon = (280.460 + 0.9856474 * n) % 360.0
    g = math.radians((357.528 + 0.9856003 * n) % 360.0)
    ecl = math.radians(mean_lon + 1.915 * math.sin(g) + 0.020 * math.sin(2.0 * g))
    eps = math.radians(23.439 - 0.0000004 * n)
    ra = math.degrees(math.atan2(math.cos(eps) * math.sin(ecl), math.cos(ecl)))
    dec = math.degrees(math.asin(math.sin(eps) * math.sin(ecl)))
    return dec, ra


def solar_zenith(lat, lon, timestamp):
    """Solar zenith angle in degrees; values above 90 mean the sun is below the horizon.

    ``timestamp`` is a datetime (naive values are taken as UTC); ``lon`` is
    positive east.
    """
    if timestamp.tzinfo is None:
        timestamp = timestamp.replace(tzinfo=timezone.utc)
    n = _days_since_j2000(timestamp)
    dec, ra = solar_declination_ra(timestamp)
    t = timestamp.astimezone(timezone.utc)
    hour = t.hour + t.minute / 60.0 + (t.second + t.microsecond * 1e-6) / 3600.0
    # sidereal time at 0h UT of the day plus the elapsed hours
    n0 = n - hour / 24.0
    gmst = (6.697375 + 0.0657098242 * n0 + 1.00273790935 * hour) % 24.0
    hour_angle = math.radians(gmst * 15.0 + lon - ra)
    phi = math.radians(lat)
    d = math.radians(dec)
    cos_z = math.sin(phi) * math.sin(d) + math.cos(phi) * math.cos(d) * math.cos(hour_angle)
    return math.degrees(math.acos(max(-1.0, min(1.0, cos_z))))


def parse_utc(text):
    """ISO-8601 timestamp to an aware UTC datetime."""
    s = text.strip().replace("Z", "+00:00")
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)
