#include "newsflow/porter.hpp"

#include <array>
#include <utility>

namespace newsflow::sentiment {

namespace {

class Stemmer {
public:
  explicit Stemmer(std::string_view word) : w_(word) {}

  std::string run()
  {
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return std::move(w_);
  }

private:
  using Rule = std::pair<std::string_view, std::string_view>;

  bool is_consonant(std::size_t i) const
  {
    switch (w_[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return false;
    case 'y':
      return i == 0 || !is_consonant(i - 1);
    default:
      return true;
    }
  }

  /// m in [C](VC)^m[V] over the first `len` letters.
  int measure(std::size_t len) const
  {
    int m = 0;
    std::size_t i = 0;
    while (i < len && is_consonant(i))
      ++i;
    while (i < len) {
      while (i < len && !is_consonant(i))
        ++i;
      if (i >= len)
        break;
      while (i < len && is_consonant(i))
        ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const
  {
    for (std::size_t i = 0; i < len; ++i)
      if (!is_consonant(i))
        return true;
    return false;
  }

  bool ends_double_consonant(std::size_t len) const
  {
    return len >= 2 && w_[len - 1] == w_[len - 2] && is_consonant(len - 1);
  }

  /// *o: stem ends consonant-vowel-consonant, the last not w, x or y.
  bool ends_cvc(std::size_t len) const
  {
    if (len < 3)
      return false;
    if (!is_consonant(len - 3) || is_consonant(len - 2) || !is_consonant(len - 1))
      return false;
    char c = w_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const
  {
    return w_.size() >= suffix.size() &&
           std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  void replace_suffix(std::size_t suffix_len, std::string_view repl)
  {
    w_.resize(w_.size() - suffix_len);
    w_ += repl;
  }

  /// The first rule whose suffix matches decides; its condition (m > min_m
  /// on the remaining stem) either applies it or ends the step.
  template <std::size_t N>
  void apply_measure_rules(const std::array<Rule, N>& rules, int min_m)
  {
    for (const auto& [suffix, repl] : rules) {
      if (!ends_with(suffix))
        continue;
      if (measure(w_.size() - suffix.size()) > min_m)
        replace_suffix(suffix.size(), repl);
      return;
    }
  }

  void step1a()
  {
    if (ends_with("sses"))
      replace_suffix(4, "ss");
    else if (ends_with("ies"))
      replace_suffix(3, "i");
    else if (ends_with("ss"))
      return;
    else if (ends_with("s"))
      replace_suffix(1, "");
  }

  void step1b()
  {
    if (ends_with("eed")) {
      if (measure(w_.size() - 3) > 0)
        replace_suffix(3, "ee");
      return;
    }
    std::size_t cut = 0;
    if (ends_with("ed") && has_vowel(w_.size() - 2))
      cut = 2;
    else if (ends_with("ing") && has_vowel(w_.size() - 3))
      cut = 3;
    if (cut == 0)
      return;
    replace_suffix(cut, "");
    if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
      w_ += 'e';
    } else if (ends_double_consonant(w_.size())) {
      char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z')
        w_.pop_back();
    } else if (measure(w_.size()) == 1 && ends_cvc(w_.size())) {
      w_ += 'e';
    }
  }

  void step1c()
  {
    if (ends_with("y") && has_vowel(w_.size() - 1))
      w_.back() = 'i';
  }

  void step2()
  {
    static constexpr std::array<Rule, 20> rules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply_measure_rules(rules, 0);
  }

  void step3()
  {
    static constexpr std::array<Rule, 7> rules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_measure_rules(rules, 0);
  }

  void step4()
  {
    static constexpr std::array<std::string_view, 19> suffixes{
        "al",  "ance", "ence", "er", "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    for (auto suffix : suffixes) {
      if (!ends_with(suffix))
        continue;
      std::size_t stem = w_.size() - suffix.size();
      bool ok = measure(stem) > 1;
      if (ok && suffix == "ion")
        ok = stem > 0 && (w_[stem - 1] == 's' || w_[stem - 1] == 't');
      if (ok)
        replace_suffix(suffix.size(), "");
      return;
    }
  }

  void step5a()
  {
    if (!ends_with("e"))
      return;
    std::size_t stem = w_.size() - 1;
    int m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem)))
      w_.pop_back();
  }

  void step5b()
  {
    if (measure(w_.size()) > 1 && ends_double_consonant(w_.size()) && w_.back() == 'l')
      w_.pop_back();
  }

  std::string w_;
};

} // namespace

std::string porter_stem(std::string_view word)
{
  if (word.size() <= 1)
    return std::string(word);
  return Stemmer(word).run();
}

} // namespace newsflow::sentiment
