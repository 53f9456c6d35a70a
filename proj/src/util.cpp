#include "irbl/util.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "irbl/errors.hpp"

namespace irbl {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ConfigError: return "ConfigError";
    case Errc::UnknownLanguage: return "UnknownLanguage";
    case Errc::LeakageGuard: return "LeakageGuard";
    case Errc::MissingField: return "MissingField";
    case Errc::MalformedTimestamp: return "MalformedTimestamp";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::UnreadableSource: return "UnreadableSource";
    case Errc::EmptyHistory: return "EmptyHistory";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::NoLinkedCommits: return "NoLinkedCommits";
    case Errc::EmptyIndex: return "EmptyIndex";
    case Errc::EmptySnapshot: return "EmptySnapshot";
    case Errc::EmptyTruth: return "EmptyTruth";
    case Errc::EmptySample: return "EmptySample";
    case Errc::TooFewBugs: return "TooFewBugs";
    case Errc::SingleClass: return "SingleClass";
    case Errc::NonFinite: return "NonFinite";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InsufficientOverlap: return "InsufficientOverlap";
    case Errc::InvariantViolation: return "InvariantViolation";
  }
  return "Error";
}

namespace {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

int parse_int(std::string_view s, size_t pos, size_t len) {
  int v = 0;
  if (pos + len > s.size()) throw Error(Errc::MalformedTimestamp, std::string(s));
  auto res = std::from_chars(s.data() + pos, s.data() + pos + len, v);
  if (res.ec != std::errc() || res.ptr != s.data() + pos + len)
    throw Error(Errc::MalformedTimestamp, std::string(s));
  return v;
}

}  // namespace

std::int64_t parse_iso8601(std::string_view s) {
  // YYYY-MM-DD[THH:MM:SS[Z|+HH:MM|-HH:MM]]
  if (s.size() < 10 || s[4] != '-' || s[7] != '-')
    throw Error(Errc::MalformedTimestamp, std::string(s));
  const int y = parse_int(s, 0, 4);
  const int mo = parse_int(s, 5, 2);
  const int d = parse_int(s, 8, 2);
  if (mo < 1 || mo > 12 || d < 1 || d > 31)
    throw Error(Errc::MalformedTimestamp, std::string(s));
  std::int64_t secs = days_from_civil(y, mo, d) * 86400;
  if (s.size() == 10) return secs;
  if (s.size() < 19 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':')
    throw Error(Errc::MalformedTimestamp, std::string(s));
  const int h = parse_int(s, 11, 2);
  const int mi = parse_int(s, 14, 2);
  const int se = parse_int(s, 17, 2);
  if (h > 23 || mi > 59 || se > 60)
    throw Error(Errc::MalformedTimestamp, std::string(s));
  secs += h * 3600 + mi * 60 + se;
  size_t pos = 19;
  // Optional fractional seconds are truncated.
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  if (pos == s.size()) return secs;  // naive timestamp, taken as UTC
  if (s[pos] == 'Z' && pos + 1 == s.size()) return secs;
  if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
    const int oh = parse_int(s, pos + 1, 2);
    const int om = parse_int(s, pos + 4, 2);
    const std::int64_t off = oh * 3600 + om * 60;
    return s[pos] == '+' ? secs - off : secs + off;
  }
  throw Error(Errc::MalformedTimestamp, std::string(s));
}

std::string format_iso8601(std::int64_t t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool ends_with_ci(std::string_view s, std::string_view suffix) {
  if (s.size() < suffix.size()) return false;
  for (size_t i = 0; i < suffix.size(); ++i) {
    char a = static_cast<char>(std::tolower(static_cast<unsigned char>(s[s.size() - suffix.size() + i])));
    char b = static_cast<char>(std::tolower(static_cast<unsigned char>(suffix[i])));
    if (a != b) return false;
  }
  return true;
}

std::string path_extension(std::string_view path) {
  const auto slash = path.find_last_of("/\\");
  const auto dot = path.find_last_of('.');
  if (dot == std::string_view::npos) return {};
  if (slash != std::string_view::npos && dot < slash) return {};
  return to_lower(path.substr(dot));
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& p) {
  return fnv1a64(read_file(p));
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void atomic_write_file(const std::filesystem::path& target, std::string_view content) {
  namespace fs = std::filesystem;
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::UnreadableSource, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::UnreadableSource, "short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::UnreadableSource, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace irbl
