#include <CLI11.hpp>

#include <iostream>

#include "ttalign/commands.hpp"

using namespace ttalign;

namespace {

template <class Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Align constants across two formal libraries with term-tree embeddings"};
  app.require_subcommand(1);

  CorpusOptions corpus;
  auto* c = app.add_subcommand("corpus", "Shuffle two tt libraries into one s-expression corpus");
  c->add_option("--in1", corpus.in1, "tt file of library 1")->required();
  c->add_option("--in2", corpus.in2, "tt file of library 2")->required();
  c->add_option("--out", corpus.out, "corpus file to write")->required();
  c->add_option("--seed", corpus.seed, "shuffle seed")->capture_default_str();

  TrainOptions train;
  std::string loss = "ns", mode = "cbow", dump = "tree", weights = "0.33,0.33,0.33",
              vars = "normalized";
  auto* t = app.add_subcommand("train", "Train embeddings on a corpus");
  t->add_option("--corpus", train.corpus, "s-expression or token corpus")->required();
  t->add_option("--out", train.out, "model file to write")->required();
  t->add_option("--dim", train.cfg.dim, "vector dimension")->capture_default_str();
  t->add_option("--lr", train.cfg.lr, "initial learning rate")->capture_default_str();
  t->add_option("--ws", train.cfg.window, "maximum context window")->capture_default_str();
  t->add_option("--epoch", train.cfg.epochs, "training epochs")->capture_default_str();
  t->add_option("--neg", train.cfg.negatives, "negative samples")->capture_default_str();
  t->add_option("--loss", loss, "softmax, hs or ns")->capture_default_str();
  t->add_option("--mode", mode, "cbow or skipgram")->capture_default_str();
  t->add_option("--dump", dump, "tree or leaf")->capture_default_str();
  t->add_option("--weights", weights, "preorder,inorder,postorder learning-rate weights")
      ->capture_default_str();
  t->add_option("--threads", train.cfg.threads, "training threads")->capture_default_str();
  t->add_option("--seed", train.cfg.seed, "random seed")->capture_default_str();
  t->add_option("--min-count", train.cfg.min_count, "drop rarer tokens")->capture_default_str();
  t->add_option("--var-policy", vars, "normalized or literal")->capture_default_str();
  t->add_option("--tokens-out", train.tokens_out, "also write the token corpus here");

  NnOptions nn;
  auto* n = app.add_subcommand("nn", "Nearest constants of a token in one library");
  n->add_option("--model", nn.model, "model file")->required();
  n->add_option("--query", nn.query, "query token, e.g. L1:const/arith/PRE")->required();
  n->add_option("--k", nn.k, "number of neighbours")->capture_default_str();
  n->add_option("--lib", nn.library, "library to search")->capture_default_str();

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Top-N hits of a model against a gold alignment");
  e->add_option("--model", ev.model, "model file")->required();
  e->add_option("--gold", ev.gold, "gold TSV name1<TAB>name2")->required();
  e->add_option("--topn", ev.topn, "cutoffs")->delimiter(',')->capture_default_str();

  AlignOptions al;
  auto* a = app.add_subcommand("align", "Pattern-matching alignment baseline");
  a->add_option("--in1", al.in1, "tt file of library 1")->required();
  a->add_option("--in2", al.in2, "tt file of library 2")->required();
  a->add_option("--out", al.out, "TSV to write, - for stdout")->capture_default_str();
  a->add_option("--eps", al.eps, "convergence threshold")->capture_default_str();
  a->add_option("--max-iters", al.max_iters, "iteration cap")->capture_default_str();

  ServeOptions sv;
  auto* s = app.add_subcommand("serve", "Line-protocol query server");
  s->add_option("--model", sv.model, "model file")->required();
  s->add_option("--port", sv.port, "TCP port, 0 for any")->capture_default_str();
  s->add_option("--host", sv.host, "IPv4 address to bind")->capture_default_str();
  s->add_option("--workers", sv.workers, "connection handlers")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : 1;
  }

  if (*c) return guarded([&] { run_corpus(corpus, std::cerr); });
  if (*t) {
    return guarded([&] {
      try {
        train.cfg.loss = parse_loss_kind(loss);
        train.cfg.model = parse_model_kind(mode);
        train.weights = parse_weights(weights);
      } catch (const std::invalid_argument& err) {
        throw UsageError(err.what());
      }
      if (dump == "tree") {
        train.dump = DumpMode::Tree;
      } else if (dump == "leaf") {
        train.dump = DumpMode::Leaf;
      } else {
        throw UsageError("--dump must be tree or leaf");
      }
      if (vars == "normalized") {
        train.vars = VarPolicy::Normalized;
      } else if (vars == "literal") {
        train.vars = VarPolicy::Literal;
      } else {
        throw UsageError("--var-policy must be normalized or literal");
      }
      run_train(train, std::cerr);
    });
  }
  if (*n) return guarded([&] { run_nn(nn, std::cout); });
  if (*e) return guarded([&] { run_eval(ev, std::cout, std::cerr); });
  if (*a) return guarded([&] { run_align(al, std::cout, std::cerr); });
  if (*s) return guarded([&] { run_serve(sv, std::cerr); });
  return 1;
}
