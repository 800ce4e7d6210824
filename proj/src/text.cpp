#include "dict2wic/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "dict2wic/errors.hpp"

namespace dict2wic::text {

namespace {

icu::UnicodeString to_unicode(std::string_view s) {
  if (!is_valid_utf8(s)) throw InvalidArgument("input is not valid UTF-8");
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string to_utf8(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error("icu_error", "cannot load NFC normalizer");
  }
  return *n;
}

// Decodes the scalar value starting at byte `i`, advancing `i`.
UChar32 next_code_point(std::string_view s, int32_t& i) {
  UChar32 c;
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), i,
          static_cast<int32_t>(s.size()), c);
  return c;
}

bool is_delimiter(UChar32 c) { return u_isUWhiteSpace(c) || u_ispunct(c); }

}  // namespace

bool is_valid_utf8(std::string_view s) {
  int32_t i = 0;
  const auto n = static_cast<int32_t>(s.size());
  while (i < n) {
    if (next_code_point(s, i) < 0) return false;
  }
  return true;
}

std::string nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc_instance().normalize(to_unicode(s), status);
  if (U_FAILURE(status)) throw Error("icu_error", "NFC normalization failed");
  return to_utf8(out);
}

bool is_nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  bool ok = nfc_instance().isNormalized(to_unicode(s), status);
  return U_SUCCESS(status) && ok;
}

std::string casefold(std::string_view s) {
  icu::UnicodeString u = to_unicode(s);
  u.foldCase();
  return to_utf8(u);
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  int32_t i = 0;
  const auto n = static_cast<int32_t>(s.size());
  while (i < n) {
    const int32_t begin = i;
    const UChar32 c = next_code_point(s, i);
    if (c < 0) throw InvalidArgument("input is not valid UTF-8");
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.append(s.substr(begin, i - begin));
  }
  return out;
}

std::string normalize(std::string_view s) {
  return collapse_whitespace(nfc(s));
}

std::string dedup_key(std::string_view s) { return casefold(normalize(s)); }

std::size_t length(std::string_view s) {
  std::size_t count = 0;
  int32_t i = 0;
  const auto n = static_cast<int32_t>(s.size());
  while (i < n) {
    if (next_code_point(s, i) < 0) {
      throw InvalidArgument("input is not valid UTF-8");
    }
    ++count;
  }
  return count;
}

std::string substr(std::string_view s, std::size_t start, std::size_t end) {
  if (start > end) throw InvalidArgument("substr: start after end");
  std::size_t index = 0;
  int32_t i = 0;
  int32_t byte_start = -1;
  const auto n = static_cast<int32_t>(s.size());
  while (i < n && index < end) {
    if (index == start) byte_start = i;
    if (next_code_point(s, i) < 0) {
      throw InvalidArgument("input is not valid UTF-8");
    }
    ++index;
  }
  if (index < end) throw InvalidArgument("substr: span past end of text");
  if (byte_start < 0) byte_start = i;
  return std::string(s.substr(byte_start, i - byte_start));
}

std::string prefix(std::string_view s, std::size_t n) {
  const std::size_t len = length(s);
  return substr(s, 0, n < len ? n : len);
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  int32_t i = 0;
  const auto n = static_cast<int32_t>(s.size());
  std::size_t index = 0;
  Token current;
  bool open = false;
  while (i < n) {
    const int32_t begin = i;
    const UChar32 c = next_code_point(s, i);
    if (c < 0) throw InvalidArgument("input is not valid UTF-8");
    if (is_delimiter(c)) {
      if (open) {
        current.end = index;
        tokens.push_back(std::move(current));
        current = Token{};
        open = false;
      }
    } else {
      if (!open) {
        current.start = index;
        open = true;
      }
      current.text.append(s.substr(begin, i - begin));
    }
    ++index;
  }
  if (open) {
    current.end = index;
    tokens.push_back(std::move(current));
  }
  return tokens;
}

}  // namespace dict2wic::text
