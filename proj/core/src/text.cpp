#include "dictaug/text.hpp"

#include "dictaug/error.hpp"

namespace dictaug {

namespace {

// Decodes one codepoint starting at `i`; returns false on malformed input.
bool decode_one(std::string_view s, size_t& i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    i += 1;
    return true;
  }
  int len = 0;
  char32_t v = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    v = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    v = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    v = b0 & 0x07;
  } else {
    return false;
  }
  if (i + len > s.size()) return false;
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return false;
    v = (v << 6) | (b & 0x3F);
  }
  // Reject overlong encodings, surrogates and out-of-range values.
  if (len == 2 && v < 0x80) return false;
  if (len == 3 && v < 0x800) return false;
  if (len == 4 && v < 0x10000) return false;
  if (v >= 0xD800 && v <= 0xDFFF) return false;
  if (v > 0x10FFFF) return false;
  cp = v;
  i += len;
  return true;
}

} // namespace

bool is_valid_utf8(std::string_view text) {
  size_t i = 0;
  char32_t cp;
  while (i < text.size()) {
    if (!decode_one(text, i, cp)) return false;
  }
  return true;
}

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  size_t i = 0;
  char32_t cp;
  while (i < text.size()) {
    if (!decode_one(text, i, cp)) {
      throw Error("invalid UTF-8 byte sequence at offset " + std::to_string(i));
    }
    out.push_back(cp);
  }
  return out;
}

void append_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(cp, out);
  return out;
}

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\r':
    case U'\n':
    case U'\v':
    case U'\f':
    case 0x00A0: // no-break space
    case 0x2009: // thin space
    case 0x200A:
    case 0x2002:
    case 0x2003:
    case 0x202F: // narrow no-break space
    case 0x3000: // ideographic space
    case 0xFEFF: // BOM / zero-width no-break space
      return true;
    default:
      return false;
  }
}

bool is_letter_cp(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
  }
  if (cp >= 0xC0 && cp <= 0x24F) {
    return cp != 0xD7 && cp != 0xF7; // multiplication / division signs
  }
  // Everything else non-ASCII and non-Latin: treat letters and symbols
  // uniformly as word characters unless they are known punctuation.
  if (cp >= 0x2000 && cp <= 0x206F) return false; // general punctuation block
  return cp > 0x24F;
}

bool is_digit_cp(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

char32_t to_lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

char32_t to_upper_cp(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return cp - 32;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 32;
  return cp;
}

bool is_lower_cp(char32_t cp) { return to_upper_cp(cp) != cp; }
bool is_upper_cp(char32_t cp) { return to_lower_cp(cp) != cp; }

std::string fold_lower(std::string_view text) {
  auto cps = decode_utf8(text);
  for (auto& cp : cps) cp = to_lower_cp(cp);
  return encode_utf8(cps);
}

std::string capitalize_first(std::string_view token) {
  auto cps = decode_utf8(token);
  if (!cps.empty()) cps[0] = to_upper_cp(cps[0]);
  return encode_utf8(cps);
}

bool starts_lowercase(std::string_view token) {
  auto cps = decode_utf8(token);
  return !cps.empty() && is_lower_cp(cps[0]);
}

} // namespace dictaug
