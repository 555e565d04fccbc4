#include "align_instances.hpp"

#include <random>
#include <string>

#include "ttalign/tt_parser.hpp"

namespace ttalign::testing {

namespace {

std::vector<TermPtr> terms(std::initializer_list<const char*> sources) {
  std::vector<TermPtr> out;
  for (const char* s : sources) out.push_back(parse_tt_term(s));
  return out;
}

std::vector<TermPtr> fixture(const char* name) {
  std::vector<TermPtr> out;
  for (const auto& item : read_tt_file(std::string(TTALIGN_FIXTURES) + name, 1)) {
    out.push_back(item.term);
  }
  return out;
}

}  // namespace


std::vector<AlignInstance> align_instances() {
  std::vector<AlignInstance> out{
      {fixture("/fig4_l1.tt"), fixture("/fig4_l2.tt")},
      {terms({"'c'"}), terms({"'d'"})},
      {terms({"('f' 'a')", "('f' 'b')"}), terms({"('g' 'c')"})},
      {terms({"(('f' 'a') = 'a')", "(('g' 'a') = 'b')"}),
       terms({"(('h' 'c') = 'c')", "(('k' 'd') = 'e')"})},
      {terms({"![x : 'num']: (('P' x) ==> ('Q' x))", "('P' '0')"}),
       terms({"![y : 'nat']: (('R' y) ==> ('S' y))", "('R' 'z')", "('S' 'z')"})},
      {terms({"('f' 'a')", "('f' 'b')", "('g' 'a')"}), terms({"('h' 'c')", "('h' 'd')"})},
      {terms({"(('+' ('a' 'a')) = 'a')", "(('+' ('a' 'b')) = 'b')"}),
       terms({"(('*' ('u' 'u')) = 'u')", "(('*' ('u' 'v')) = 'v')"})},
      {terms({"(('le' 'x0') /\\ ('le' 'x1'))", "(('le' 'x0') \\/ ('lt' 'x0'))"}),
       terms({"(('leq' 'y0') /\\ ('leq' 'y1'))", "(('leq' 'y0') \\/ ('less' 'y0'))"})},
      {terms({"^[x : 'A']: ('f' x)", "^[x : 'B']: ('f' x)"}),
       terms({"^[z : 'A2']: ('g' z)", "^[z : 'B2']: ('h' z)"})},
      {terms({"?[x : 'T']: (x = 'e')", "![x : 'T']: (x = 'e')"}),
       terms({"?[x : 'U']: (x = 'o')", "![x : 'U']: (x = 'i')"})},
      {terms({"(('f' 'a') = ('g' 'a'))", "(('f' 'b') = ('g' 'b'))", "(('f' 'a') = ('g' 'b'))"}),
       terms({"(('F' 'A') = ('G' 'A'))", "(('F' 'B') = ('G' 'B'))"})},
      {terms({"('a' <=> 'b')", "('b' <=> 'c')", "('c' <=> 'a')"}),
       terms({"('p' <=> 'q')", "('q' <=> 'r')"})},
      {terms({"![x : 'num', y : 'num']: (('+' (x y)) = ('+' (y x)))"}),
       terms({"![a : 'int', b : 'int']: (('add' (a b)) = ('add' (b a)))",
              "![a : 'real', b : 'real']: (('add' (a b)) = ('add' (b a)))"})},
  };
  const std::vector<const char*> templates{"(('%0' '%1') = '%1')", "('%0' ('%1' '%2'))",
                                           "(('%0' '%1') ==> ('%0' '%2'))", "('%2' = '%0')"};
  std::mt19937_64 rng(77);
  for (int k = 0; k < 11; ++k) {
    AlignInstance inst;
    for (int lib = 0; lib < 2; ++lib) {
      const int count = std::uniform_int_distribution<int>(2, 7)(rng);
      for (int t = 0; t < count; ++t) {
        std::string s = templates[std::uniform_int_distribution<std::size_t>(
            0, templates.size() - 1)(rng)];
        for (char slot : {'0', '1', '2'}) {
          const std::string name =
              std::string(lib ? "q" : "p") +
              std::to_string(std::uniform_int_distribution<int>(0, 4)(rng));
          for (std::size_t pos; (pos = s.find(std::string("%") + slot)) != std::string::npos;) {
            s.replace(pos, 2, name);
          }
        }
        (lib ? inst.l2 : inst.l1).push_back(parse_tt_term(s));
      }
    }
    out.push_back(std::move(inst));
  }
  return out;
}


}  // namespace ttalign::testing
