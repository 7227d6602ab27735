#include "virolab/recursion.hpp"

#include "virolab/interp.hpp"
#include "virolab/lang.hpp"

namespace virolab {

namespace {

// Frame of the fixed-point construction: run code_c on (self-text, input).
// The self-text is rebuilt by the same specialization that produced it.
// double_fix splices these exact bytes in-language, so any edit here must
// keep the two spellings identical.
constexpr const char* kFixPre = "(exec ";
constexpr const char* kFixPost = " (pair (smn (fst x0) (fst x0)) (snd x0)))";

Word fix_frame(const Word& code_c) {
  return kFixPre + lang::lit(code_c) + kFixPost;
}

void require_parses(const Word& code, const char* who) {
  if (!lang::parses(code)) {
    throw SyntaxError(std::string(who) + ": code does not parse");
  }
}

}  // namespace

FixedPoint kleene_fix(const Word& code_f) {
  require_parses(code_f, "kleene_fix");
  Word g = fix_frame(code_f);
  Word e = smn(g, g);
  return {e, {{"frame", g}, {"fixed_point", e}}};
}

std::pair<FixedPoint, FixedPoint> double_fix(const Word& code_f, const Word& code_g) {
  require_parses(code_f, "double_fix");
  require_parses(code_g, "double_fix");

  // Body for e1, on input pair(self, x):
  //   zc = code_g specialized to self          (the seed of e2)
  //   zg = the fix frame around zc, spliced from the same byte constants
  //        the host uses, so (smn zg zg) equals the host-built e2 exactly
  //   then defer to code_f on triple(self, e2, x).
  Word b1 = "(let zs (fst x0) (let zx (snd x0) (let zc (smn " +
            lang::lit(code_g) + " zs) (let zg (cat " + lang::lit(kFixPre) +
            " (cat (quo zc) " + lang::lit(kFixPost) +
            ")) (exec " + lang::lit(code_f) +
            " (pair zs (pair (smn zg zg) zx)))))))";

  FixedPoint fp1 = kleene_fix(b1);
  fp1.transcript.insert(fp1.transcript.begin(), {"first_body", b1});

  FixedPoint fp2 = kleene_fix(smn(code_g, fp1.e));
  fp2.transcript.insert(fp2.transcript.begin(),
                        {"second_seed", smn(code_g, fp1.e)});
  return {std::move(fp1), std::move(fp2)};
}

Word ExplicitFix::apply(const Word& y) const { return smn(specialized, y); }

ExplicitFix explicit_fix(const Word& code_f) {
  require_parses(code_f, "explicit_fix");
  // On input pair(self, y): specialize code_f twice, first with self, then
  // with y. The result q_y then runs code_f on triple(self, y, x).
  Word b = "(smn (smn " + lang::lit(code_f) + " (fst x0)) (snd x0))";
  FixedPoint fp = kleene_fix(b);
  Word specialized = smn(code_f, fp.e);
  fp.transcript.insert(fp.transcript.begin(), {"generator_body", b});
  fp.transcript.push_back({"specialized", specialized});
  return {std::move(fp.e), std::move(specialized), std::move(fp.transcript)};
}

}  // namespace virolab
