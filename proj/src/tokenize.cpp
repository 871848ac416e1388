#include "newsflow/error.hpp"
#include "newsflow/sentiment.hpp"
#include "newsflow/text_io.hpp"

#include <array>
#include <cctype>

namespace newsflow::sentiment {

namespace {

constexpr std::array<std::string_view, 36> kAbbreviations{
    "mr",  "mrs", "ms",  "dr",  "prof", "sr",   "jr",  "st",  "inc", "corp", "co",  "ltd",
    "llc", "plc", "vs",  "etc", "jan",  "feb",  "mar", "apr", "jun", "jul",  "aug", "sep",
    "sept", "oct", "nov", "dec", "approx", "est", "dept", "gov", "vol", "fig", "cf", "al"};

bool is_alpha(unsigned char c) { return std::isalpha(c) != 0; }

/// Length in bytes of an apostrophe at `i` (ASCII ' or U+2019), else 0.
std::size_t apostrophe_at(std::string_view text, std::size_t i)
{
  if (text[i] == '\'')
    return 1;
  if (i + 2 < text.size() + 0 && static_cast<unsigned char>(text[i]) == 0xE2 &&
      static_cast<unsigned char>(text[i + 1]) == 0x80 && static_cast<unsigned char>(text[i + 2]) == 0x99)
    return 3;
  return 0;
}

class Tokenizer {
public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  TokenizedArticle run()
  {
    std::size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      if (is_alpha(static_cast<unsigned char>(c)) || apostrophe_at(text_, i)) {
        i = read_word(i);
      } else if (c == '.' || c == '!' || c == '?') {
        i = read_terminal(i);
      } else if (c == '\n') {
        std::size_t j = i + 1;
        while (j < text_.size() && (text_[j] == ' ' || text_[j] == '\t' || text_[j] == '\r'))
          ++j;
        if (j < text_.size() && text_[j] == '\n')
          end_sentence();
        i = j;
      } else {
        last_word_end_ = std::string_view::npos;
        ++i;
      }
    }
    end_sentence();
    for (const auto& s : out_.sentences)
      out_.word_count += s.size();
    return std::move(out_);
  }

private:
  std::size_t read_word(std::size_t start)
  {
    std::size_t i = start;
    std::string word;
    std::vector<std::size_t> offsets; // byte offset of each char of `word`
    while (i < text_.size()) {
      if (is_alpha(static_cast<unsigned char>(text_[i]))) {
        word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text_[i]))));
        offsets.push_back(i);
        ++i;
      } else if (auto n = apostrophe_at(text_, i)) {
        word.push_back('\'');
        offsets.push_back(i);
        i += n;
      } else {
        break;
      }
    }
    std::size_t lo = 0, hi = word.size();
    while (lo < hi && word[lo] == '\'')
      ++lo;
    while (hi > lo && word[hi - 1] == '\'')
      --hi;
    if (lo < hi) {
      std::string core = word.substr(lo, hi - lo);
      std::size_t offset = offsets[lo];
      if (core.size() > 3 && core.compare(core.size() - 3, 3, "n't") == 0) {
        std::size_t split = core.size() - 3;
        current_.push_back({core.substr(0, split), offset});
        current_.push_back({"n't", offsets[lo + split]});
      } else {
        current_.push_back({core, offset});
      }
      last_word_ = core;
      last_word_end_ = i;
    } else {
      last_word_end_ = std::string_view::npos;
    }
    return i;
  }

  bool guarded_by_previous_word(std::size_t dot) const
  {
    if (last_word_end_ != dot)
      return false;
    if (last_word_.size() == 1)
      return true; // initials such as "U.S."
    for (auto abbr : kAbbreviations)
      if (last_word_ == abbr)
        return true;
    return false;
  }

  std::size_t read_terminal(std::size_t start)
  {
    std::size_t i = start;
    bool only_dots = true;
    while (i < text_.size() && (text_[i] == '.' || text_[i] == '!' || text_[i] == '?')) {
      only_dots = only_dots && text_[i] == '.';
      ++i;
    }
    std::size_t run = i - start;
    // closing quotes and brackets stay with the sentence they end
    std::size_t j = i;
    while (j < text_.size() && (text_[j] == '"' || text_[j] == '\'' || text_[j] == ')' || text_[j] == ']'))
      ++j;
    bool at_break = j >= text_.size() || std::isspace(static_cast<unsigned char>(text_[j])) != 0;
    bool terminal = at_break;
    if (terminal && only_dots && run == 1 && guarded_by_previous_word(start))
      terminal = false;
    if (only_dots && run == 1 && start > 0 && i < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[start - 1])) &&
        std::isdigit(static_cast<unsigned char>(text_[i])))
      terminal = false;
    if (terminal)
      end_sentence();
    last_word_end_ = std::string_view::npos;
    return j;
  }

  void end_sentence()
  {
    if (!current_.empty())
      out_.sentences.push_back(std::move(current_));
    current_.clear();
  }

  std::string_view text_;
  TokenizedArticle out_;
  std::vector<Token> current_;
  std::string last_word_;
  std::size_t last_word_end_ = std::string_view::npos;
};

} // namespace

TokenizedArticle tokenize(std::string_view text)
{
  if (text.empty())
    throw Error(Errc::empty_text, "cannot tokenize empty text");
  return Tokenizer(text).run();
}

} // namespace newsflow::sentiment
