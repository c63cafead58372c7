#include "phonoscope/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <utility>

#include "phonoscope/error.hpp"

namespace phonoscope {

namespace {

// ---------------------------------------------------------------- unicode

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(char(cp));
  } else if (cp < 0x800) {
    out.push_back(char(0xC0 | (cp >> 6)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(char(0xE0 | (cp >> 12)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(char(0xF0 | (cp >> 18)));
    out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  }
}

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char b = s[i];
    char32_t cp = 0;
    std::size_t len = 1;
    if (b < 0x80) {
      cp = b;
    } else if ((b & 0xE0) == 0xC0) {
      cp = b & 0x1F;
      len = 2;
    } else if ((b & 0xF0) == 0xE0) {
      cp = b & 0x0F;
      len = 3;
    } else if ((b & 0xF8) == 0xF0) {
      cp = b & 0x07;
      len = 4;
    } else {
      cp = 0xFFFD;  // stray continuation byte
    }
    if (i + len > s.size()) {
      cps.push_back(0xFFFD);
      break;
    }
    for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (s[i + k] & 0x3F);
    cps.push_back(cp);
    i += len;
  }
  return cps;
}

std::string decode_utf16(std::string_view bytes, bool big_endian, std::string_view what) {
  if (bytes.size() % 2 != 0)
    fail(ErrorKind::MalformedFile, std::string(what) + ": UTF-16 content has an odd byte count");
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const auto unit = [&](std::size_t at) {
    const unsigned char a = bytes[at], b = bytes[at + 1];
    return big_endian ? char32_t(a << 8 | b) : char32_t(b << 8 | a);
  };
  while (i < bytes.size()) {
    char32_t cp = unit(i);
    i += 2;
    if (cp >= 0xD800 && cp <= 0xDBFF) {
      if (i >= bytes.size())
        fail(ErrorKind::MalformedFile, std::string(what) + ": dangling UTF-16 surrogate");
      const char32_t lo = unit(i);
      i += 2;
      cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
    }
    append_utf8(out, cp);
  }
  return out;
}

struct Composition {
  char32_t base;
  char32_t mark;
  char32_t composed;
};

// Precomposed forms that exist for the Latin base letters seen in IPA
// transcriptions. Mark sequences with no precomposed form (syllabic,
// dental, nasalized-on-IPA-letters, ...) are already canonical.
constexpr Composition kCompositions[] = {
    {U'a', 0x0300, 0x00E0}, {U'e', 0x0300, 0x00E8}, {U'i', 0x0300, 0x00EC},
    {U'o', 0x0300, 0x00F2}, {U'u', 0x0300, 0x00F9},
    {U'a', 0x0301, 0x00E1}, {U'e', 0x0301, 0x00E9}, {U'i', 0x0301, 0x00ED},
    {U'o', 0x0301, 0x00F3}, {U'u', 0x0301, 0x00FA}, {U'y', 0x0301, 0x00FD},
    {U'a', 0x0302, 0x00E2}, {U'e', 0x0302, 0x00EA}, {U'i', 0x0302, 0x00EE},
    {U'o', 0x0302, 0x00F4}, {U'u', 0x0302, 0x00FB},
    {U'a', 0x0303, 0x00E3}, {U'e', 0x0303, 0x1EBD}, {U'i', 0x0303, 0x0129},
    {U'n', 0x0303, 0x00F1}, {U'o', 0x0303, 0x00F5}, {U'u', 0x0303, 0x0169},
    {U'y', 0x0303, 0x1EF9},
    {U'a', 0x0304, 0x0101}, {U'e', 0x0304, 0x0113}, {U'i', 0x0304, 0x012B},
    {U'o', 0x0304, 0x014D}, {U'u', 0x0304, 0x016B},
    {U'a', 0x0306, 0x0103}, {U'e', 0x0306, 0x0115}, {U'g', 0x0306, 0x011F},
    {U'i', 0x0306, 0x012D}, {U'o', 0x0306, 0x014F}, {U'u', 0x0306, 0x016D},
    {U'a', 0x0308, 0x00E4}, {U'e', 0x0308, 0x00EB}, {U'i', 0x0308, 0x00EF},
    {U'o', 0x0308, 0x00F6}, {U'u', 0x0308, 0x00FC}, {U'y', 0x0308, 0x00FF},
    {U'a', 0x030A, 0x00E5},
    {U'a', 0x030C, 0x01CE}, {U'c', 0x030C, 0x010D}, {U'e', 0x030C, 0x011B},
    {U'g', 0x030C, 0x01E7}, {U'i', 0x030C, 0x01D0}, {U'o', 0x030C, 0x01D2},
    {U's', 0x030C, 0x0161}, {U'u', 0x030C, 0x01D4}, {U'z', 0x030C, 0x017E},
    {U'c', 0x0327, 0x00E7},
};

// ---------------------------------------------------------------- lines

struct Line {
  std::string text;
  std::size_t number;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0, number = 1;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string_view raw = text.substr(start, i - start);
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      lines.push_back({std::string(raw), number});
      start = i + 1;
      ++number;
    }
  }
  if (!lines.empty() && lines.back().text.empty()) lines.pop_back();
  return lines;
}

std::string_view trimmed(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// ---------------------------------------------------------------- parser

struct RawTier {
  std::string klass;
  std::string name;
  double xmin = 0.0, xmax = 0.0;
  struct Interval {
    double xmin, xmax;
    std::string text;
  };
  std::vector<Interval> intervals;
};

class Cursor {
 public:
  Cursor(std::vector<Line> lines, std::string what)
      : lines_(std::move(lines)), what_(std::move(what)) {}

  bool at_end() {
    skip_blank();
    return index_ >= lines_.size();
  }

  const Line& peek() {
    skip_blank();
    if (index_ >= lines_.size())
      fail(ErrorKind::MalformedFile, what_ + ": unexpected end of file");
    return lines_[index_];
  }

  Line take() {
    const Line& l = peek();
    ++index_;
    return l;
  }

  [[noreturn]] void error(const Line& line, const std::string& message) const {
    fail(ErrorKind::MalformedFile,
         what_ + ": line " + std::to_string(line.number) + ": " + message);
  }

  const std::string& what() const { return what_; }

 private:
  void skip_blank() {
    while (index_ < lines_.size() && trimmed(lines_[index_].text).empty()) ++index_;
  }

  std::vector<Line> lines_;
  std::string what_;
  std::size_t index_ = 0;
};

double parse_number(Cursor& cur, const Line& line, std::string_view token) {
  token = trimmed(token);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    cur.error(line, "expected a number, got '" + std::string(token) + "'");
  return v;
}

std::string unquote(Cursor& cur, const Line& line, std::string_view token) {
  token = trimmed(token);
  if (token.size() < 2 || token.front() != '"' || token.back() != '"')
    cur.error(line, "expected a quoted string, got '" + std::string(token) + "'");
  std::string_view inner = token.substr(1, token.size() - 2);
  std::string out;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i] == '"') {
      if (i + 1 < inner.size() && inner[i + 1] == '"') {
        out.push_back('"');
        ++i;
      } else {
        cur.error(line, "stray quote inside string");
      }
    } else {
      out.push_back(inner[i]);
    }
  }
  return out;
}

// Long form: "key = value" (tolerating the "intervals: size = N" shape).
std::string_view long_value(Cursor& cur, const Line& line, std::string_view key) {
  std::string_view t = trimmed(line.text);
  if (t.substr(0, key.size()) != key)
    cur.error(line, "expected '" + std::string(key) + " = ...'");
  std::size_t eq = t.find('=');
  if (eq == std::string_view::npos)
    cur.error(line, "expected '=' after '" + std::string(key) + "'");
  return t.substr(eq + 1);
}

double long_number(Cursor& cur, std::string_view key) {
  Line line = cur.take();
  return parse_number(cur, line, long_value(cur, line, key));
}

std::string long_string(Cursor& cur, std::string_view key) {
  Line line = cur.take();
  return unquote(cur, line, long_value(cur, line, key));
}

void expect_header(Cursor& cur) {
  {
    Line line = cur.take();
    if (unquote(cur, line, long_value(cur, line, "File type")) != "ooTextFile")
      cur.error(line, "not an ooTextFile");
  }
  {
    Line line = cur.take();
    if (unquote(cur, line, long_value(cur, line, "Object class")) != "TextGrid")
      cur.error(line, "object class is not TextGrid");
  }
}

std::vector<RawTier> parse_long_form(Cursor& cur) {
  long_number(cur, "xmin");
  long_number(cur, "xmax");
  {
    Line line = cur.take();
    std::string_view t = trimmed(line.text);
    if (t.find("tiers?") != 0) cur.error(line, "expected 'tiers? <exists>'");
    if (t.find("<exists>") == std::string_view::npos) return {};
  }
  const auto tier_count = std::size_t(long_number(cur, "size"));
  {
    std::string_view t = trimmed(cur.peek().text);
    if (t.substr(0, 4) == "item" && t.find('[') != std::string_view::npos &&
        t.find(']') != std::string_view::npos && t.find('=') == std::string_view::npos) {
      std::string_view inside = t.substr(t.find('[') + 1, t.find(']') - t.find('[') - 1);
      if (trimmed(inside).empty()) cur.take();  // "item []:"
    }
  }

  std::vector<RawTier> tiers;
  for (std::size_t t = 0; t < tier_count; ++t) {
    {
      Line line = cur.take();
      if (trimmed(line.text).substr(0, 4) != "item") cur.error(line, "expected 'item [n]:'");
    }
    RawTier tier;
    tier.klass = long_string(cur, "class");
    tier.name = long_string(cur, "name");
    tier.xmin = long_number(cur, "xmin");
    tier.xmax = long_number(cur, "xmax");
    if (tier.klass == "IntervalTier") {
      Line line = cur.take();
      const auto count = std::size_t(parse_number(cur, line, long_value(cur, line, "intervals")));
      tier.intervals.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        {
          Line l = cur.take();
          if (trimmed(l.text).substr(0, 9) != "intervals") cur.error(l, "expected 'intervals [n]:'");
        }
        RawTier::Interval iv;
        iv.xmin = long_number(cur, "xmin");
        iv.xmax = long_number(cur, "xmax");
        iv.text = long_string(cur, "text");
        tier.intervals.push_back(std::move(iv));
      }
    } else if (tier.klass == "TextTier") {
      Line line = cur.take();
      const auto count = std::size_t(parse_number(cur, line, long_value(cur, line, "points")));
      for (std::size_t i = 0; i < count; ++i) {
        {
          Line l = cur.take();
          if (trimmed(l.text).substr(0, 6) != "points") cur.error(l, "expected 'points [n]:'");
        }
        long_number(cur, "number");
        long_string(cur, "mark");
      }
    } else {
      Line line = cur.peek();
      cur.error(line, "unknown tier class '" + tier.klass + "'");
    }
    tiers.push_back(std::move(tier));
  }
  return tiers;
}

std::vector<RawTier> parse_short_form(Cursor& cur) {
  const auto take_number = [&] {
    Line line = cur.take();
    return parse_number(cur, line, line.text);
  };
  const auto take_string = [&] {
    Line line = cur.take();
    return unquote(cur, line, line.text);
  };
  take_number();  // file xmin
  take_number();  // file xmax
  {
    Line line = cur.take();
    std::string_view t = trimmed(line.text);
    if (t != "<exists>") {
      if (t == "<absent>") return {};
      cur.error(line, "expected <exists>");
    }
  }
  const auto tier_count = std::size_t(take_number());
  std::vector<RawTier> tiers;
  for (std::size_t t = 0; t < tier_count; ++t) {
    RawTier tier;
    tier.klass = take_string();
    tier.name = take_string();
    tier.xmin = take_number();
    tier.xmax = take_number();
    const auto count = std::size_t(take_number());
    if (tier.klass == "IntervalTier") {
      tier.intervals.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        RawTier::Interval iv;
        iv.xmin = take_number();
        iv.xmax = take_number();
        iv.text = take_string();
        tier.intervals.push_back(std::move(iv));
      }
    } else if (tier.klass == "TextTier") {
      for (std::size_t i = 0; i < count; ++i) {
        take_number();
        take_string();
      }
    } else {
      cur.error(cur.peek(), "unknown tier class '" + tier.klass + "'");
    }
    tiers.push_back(std::move(tier));
  }
  return tiers;
}

}  // namespace

std::string normalize_label(std::string_view utf8) {
  std::vector<char32_t> cps = decode_utf8(utf8);
  std::vector<char32_t> out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    bool composed = false;
    if (!out.empty()) {
      for (const Composition& c : kCompositions) {
        if (c.base == out.back() && c.mark == cp) {
          out.back() = c.composed;
          composed = true;
          break;
        }
      }
    }
    if (!composed) out.push_back(cp);
  }
  std::string result;
  result.reserve(utf8.size());
  for (char32_t cp : out) append_utf8(result, cp);
  return result;
}

AlignmentTrack parse_textgrid(std::string_view bytes, const TextGridOptions& options,
                              std::string utterance_id) {
  const std::string what =
      utterance_id.empty() ? std::string("textgrid") : "textgrid '" + utterance_id + "'";

  std::string utf8;
  if (bytes.size() >= 2 && std::uint8_t(bytes[0]) == 0xFF && std::uint8_t(bytes[1]) == 0xFE)
    utf8 = decode_utf16(bytes.substr(2), /*big_endian=*/false, what);
  else if (bytes.size() >= 2 && std::uint8_t(bytes[0]) == 0xFE && std::uint8_t(bytes[1]) == 0xFF)
    utf8 = decode_utf16(bytes.substr(2), /*big_endian=*/true, what);
  else if (bytes.size() >= 3 && std::uint8_t(bytes[0]) == 0xEF && std::uint8_t(bytes[1]) == 0xBB &&
           std::uint8_t(bytes[2]) == 0xBF)
    utf8 = std::string(bytes.substr(3));
  else
    utf8 = std::string(bytes);

  Cursor cur(split_lines(utf8), what);
  expect_header(cur);

  // Long form spells out "xmin = ..."; the short form has a bare number.
  std::vector<RawTier> tiers;
  {
    std::string_view t = trimmed(cur.peek().text);
    if (t.substr(0, 4) == "xmin")
      tiers = parse_long_form(cur);
    else
      tiers = parse_short_form(cur);
  }

  const RawTier* tier = nullptr;
  for (const RawTier& t : tiers)
    if (t.klass == "IntervalTier" && t.name == options.tier_name) {
      tier = &t;
      break;
    }
  if (tier == nullptr)
    fail(ErrorKind::NotFound,
         what + ": no interval tier named '" + options.tier_name + "' (tiers present: " +
             [&] {
               std::string names;
               for (const RawTier& t : tiers) {
                 if (!names.empty()) names += ", ";
                 names += "'" + t.name + "'";
               }
               return names.empty() ? std::string("none") : names;
             }() +
             ")");

  AlignmentTrack track;
  track.utterance_id = std::move(utterance_id);
  track.xmax = tier->xmax;
  for (const RawTier::Interval& iv : tier->intervals) {
    const std::string label = normalize_label(iv.text);
    const bool silent = std::find(options.silence_labels.begin(), options.silence_labels.end(),
                                  label) != options.silence_labels.end();
    if (silent) continue;
    if (!(iv.xmin >= 0.0) || !(iv.xmin < iv.xmax))
      fail(ErrorKind::MalformedFile,
           what + ": interval '" + label + "' has invalid bounds [" + std::to_string(iv.xmin) +
               ", " + std::to_string(iv.xmax) + "]");
    track.intervals.push_back({label, iv.xmin, iv.xmax});
  }
  std::stable_sort(track.intervals.begin(), track.intervals.end(),
                   [](const PhonemeInterval& a, const PhonemeInterval& b) {
                     return a.start < b.start;
                   });
  for (std::size_t i = 1; i < track.intervals.size(); ++i) {
    const auto& prev = track.intervals[i - 1];
    const auto& next = track.intervals[i];
    if (prev.end > next.start)
      fail(ErrorKind::MalformedFile,
           what + ": intervals '" + prev.label + "' and '" + next.label + "' overlap (" +
               std::to_string(prev.end) + " > " + std::to_string(next.start) + ")");
  }
  return track;
}

void CategoryMap::insert(const std::string& label, const std::string& category, CvClass cv) {
  const std::string key = normalize_label(label);
  if (entries_.count(key))
    fail(ErrorKind::InvalidArgument, "duplicate label '" + label + "' in category map");
  auto it = category_class_.find(category);
  if (it != category_class_.end() && it->second != cv)
    fail(ErrorKind::InvalidArgument,
         "category '" + category + "' is flagged both consonant and vowel");
  category_class_.emplace(category, cv);
  entries_.emplace(key, Entry{category, cv});
}

std::optional<CategoryMap::Entry> CategoryMap::lookup(std::string_view label) const {
  auto it = entries_.find(normalize_label(label));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<CvClass> CategoryMap::class_of_category(std::string_view category) const {
  auto it = category_class_.find(std::string(category));
  if (it == category_class_.end()) return std::nullopt;
  return it->second;
}

CategoryMap load_category_map(std::string_view tsv) {
  CategoryMap map;
  std::size_t line_no = 0, start = 0;
  while (start <= tsv.size()) {
    std::size_t nl = tsv.find('\n', start);
    std::string_view line =
        tsv.substr(start, nl == std::string_view::npos ? tsv.size() - start : nl - start);
    start = nl == std::string_view::npos ? tsv.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t1 == std::string_view::npos || t2 == std::string_view::npos)
      fail(ErrorKind::MalformedFile,
           "category map line " + std::to_string(line_no) +
               ": expected 'label<TAB>category<TAB>consonant|vowel'");
    const std::string label(line.substr(0, t1));
    const std::string category(line.substr(t1 + 1, t2 - t1 - 1));
    const std::string flag(trimmed(line.substr(t2 + 1)));
    CvClass cv;
    if (flag == "consonant")
      cv = CvClass::Consonant;
    else if (flag == "vowel")
      cv = CvClass::Vowel;
    else
      fail(ErrorKind::MalformedFile,
           "category map line " + std::to_string(line_no) + ": unknown flag '" + flag +
               "' (expected consonant or vowel)");
    map.insert(label, category, cv);
  }
  return map;
}

const CategoryMap& default_category_map() {
  static const CategoryMap map = load_category_map(default_category_map_tsv());
  return map;
}

SegmentRanges to_sample_ranges(const AlignmentTrack& track, int sample_rate,
                               double min_duration_s) {
  if (sample_rate <= 0) fail(ErrorKind::InvalidArgument, "sample rate must be positive");
  if (min_duration_s < 0) fail(ErrorKind::InvalidArgument, "min duration must be >= 0");
  const auto min_samples = std::llround(min_duration_s * sample_rate);
  SegmentRanges out;
  int index = 0;
  for (const PhonemeInterval& iv : track.intervals) {
    const auto begin = std::llround(iv.start * sample_rate);
    const auto end = std::llround(iv.end * sample_rate);
    if (end <= begin) {
      out.excluded.push_back({iv.label, index, "empty after rounding to samples"});
    } else if (end - begin < min_samples) {
      out.excluded.push_back({iv.label, index, "below minimum duration"});
    } else {
      out.included.push_back({std::size_t(begin), std::size_t(end), iv.label, index});
    }
    ++index;
  }
  return out;
}

}  // namespace phonoscope
