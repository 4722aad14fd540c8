#include "siegel/brjuno.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <queue>
#include <thread>

#include "siegel/errors.hpp"

namespace siegel {

std::string to_string(BrjunoVariant v) { return v == BrjunoVariant::B ? "B" : "Bprime"; }

std::string to_string(HeightRegime r) { return r == HeightRegime::Log ? "log" : "loglog"; }

RealScalar brjuno_summand(const RealScalar& x, BrjunoVariant variant) {
  RealScalar l = log(x);
  if (variant == BrjunoVariant::B) return -l;
  return log(RealScalar::integer(1, x.precision_bits()) - l);
}

BrjunoSum brjuno_partial(const RotationVector& alpha, const Word& word,
                         const std::vector<GaussStep>& orbit, BrjunoVariant variant) {
  if (orbit.size() != word.size()) {
    throw Error(ErrorKind::InvalidInput, "orbit length does not match word length");
  }
  BrjunoSum sum{variant, word, {}, RealScalar::integer(0, alpha[0].precision_bits()),
                static_cast<int>(word.size())};
  RealScalar product = RealScalar::integer(1, alpha[0].precision_bits());
  for (std::size_t n = 0; n < word.size(); ++n) {
    const RotationVector& current = n == 0 ? alpha : orbit[n - 1].image;
    const RealScalar& pivot = current.letter(word[n]);
    RealScalar term = product * brjuno_summand(pivot, variant);
    sum.terms.push_back({static_cast<int>(n), product, term});
    sum.value = sum.value + term;
    product = product * pivot;
  }
  return sum;
}

BrjunoSum brjuno_partial(const RotationVector& alpha, const Word& word, BrjunoVariant variant,
                         const PrecisionPolicy& policy) {
  return brjuno_partial(alpha, word, gauss_orbit(alpha, word, policy), variant);
}

namespace {

struct SearchNode {
  Word prefix;
  RotationVector state;
  RealScalar product;
  RealScalar partial;
  double lower;  // partial.lo rounded down

  static double lower_of(const RealScalar& x) { return x.lo().to_double(MPFR_RNDD); }
};

struct NodeOrder {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.lower != b.lower) return a.lower > b.lower;
    return a.prefix > b.prefix;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(int depth, BrjunoVariant variant, const PrecisionPolicy& policy)
      : depth_(depth), variant_(variant), policy_(policy) {}

  // Children of `node` in letter order; failures are recorded as exclusions.
  std::vector<SearchNode> expand(const SearchNode& node) {
    nodes_expanded_.fetch_add(1, std::memory_order_relaxed);
    std::vector<SearchNode> out;
    const std::size_t n = node.state.size();
    for (std::size_t j = 1; j <= n; ++j) {
      Word prefix = node.prefix;
      prefix.push_back(static_cast<int>(j));
      try {
        const RealScalar& pivot = node.state.letter(static_cast<int>(j));
        GaussStep step = gauss_step(node.state, static_cast<int>(j), policy_);
        RealScalar partial = node.partial + node.product * brjuno_summand(pivot, variant_);
        RealScalar product = node.product * pivot;
        double lower = SearchNode::lower_of(partial);
        out.push_back({std::move(prefix), std::move(step.image), std::move(product),
                       std::move(partial), lower});
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(mutex_);
        excluded_.push_back({std::move(prefix), e.what()});
      }
    }
    return out;
  }

  bool complete(const SearchNode& node) const {
    return static_cast<int>(node.prefix.size()) == depth_;
  }

  bool pruned(const SearchNode& node) const {
    return node.lower > best_upper_.load(std::memory_order_acquire);
  }

  void offer(SearchNode node) {
    double upper = node.partial.hi().to_double(MPFR_RNDU);
    double cur = best_upper_.load(std::memory_order_acquire);
    while (upper < cur &&
           !best_upper_.compare_exchange_weak(cur, upper, std::memory_order_acq_rel)) {
    }
    std::lock_guard<std::mutex> lock(mutex_);
    contenders_.push_back(std::move(node));
  }

  // Best-first search of the subtree under `root`.
  void search(SearchNode root) {
    std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> open;
    open.push(std::move(root));
    while (!open.empty()) {
      SearchNode node = open.top();
      open.pop();
      // Queue is ordered by lower bound: nothing left can beat the incumbent.
      if (pruned(node)) break;
      if (complete(node)) {
        offer(std::move(node));
        continue;
      }
      for (SearchNode& child : expand(node)) {
        if (!pruned(child)) open.push(std::move(child));
      }
    }
  }

  WordSearchResult finish() {
    if (contenders_.empty()) {
      throw Error(ErrorKind::DomainError, "every word of the requested depth was excluded");
    }
    // Certified minimum upper bound over all complete words found.
    const BigFloat* upper = &contenders_.front().partial.hi();
    for (const auto& c : contenders_) {
      if (compare(c.partial.hi(), *upper) < 0) upper = &c.partial.hi();
    }
    std::vector<const SearchNode*> close;
    for (const auto& c : contenders_) {
      if (compare(c.partial.lo(), *upper) <= 0) close.push_back(&c);
    }
    std::sort(close.begin(), close.end(),
              [](const SearchNode* a, const SearchNode* b) { return a->prefix < b->prefix; });
    const SearchNode* best = close.front();
    for (std::size_t i = 1; i < close.size(); ++i) {
      int s;
      try {
        s = certified_compare(close[i]->partial, best->partial, policy_);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::UndecidableAtPrecision) throw;
        s = 0;
      }
      if (s == 0) {
        throw Error(ErrorKind::ExactTie, "words cannot be ordered at maximum precision");
      }
      if (s < 0) best = close[i];
    }
    WordSearchResult result{best->prefix, best->partial, nodes_expanded_.load(), false, {}};
    std::sort(excluded_.begin(), excluded_.end(),
              [](const ExcludedPrefix& a, const ExcludedPrefix& b) { return a.prefix < b.prefix; });
    result.excluded = std::move(excluded_);
    result.proof = result.excluded.empty();
    return result;
  }

 private:
  int depth_;
  BrjunoVariant variant_;
  PrecisionPolicy policy_;
  std::atomic<double> best_upper_{std::numeric_limits<double>::infinity()};
  std::atomic<long long> nodes_expanded_{0};
  std::mutex mutex_;
  std::vector<SearchNode> contenders_;
  std::vector<ExcludedPrefix> excluded_;
};

}  // namespace

WordSearchResult brjuno_minimize(const RotationVector& alpha, int depth, BrjunoVariant variant,
                                 const SearchOptions& options) {
  if (depth < 1) throw Error(ErrorKind::InvalidInput, "search depth must be >= 1");
  const int prec = alpha[0].precision_bits();
  BranchAndBound bnb(depth, variant, options.precision);
  SearchNode root{{}, alpha, RealScalar::integer(1, prec), RealScalar::integer(0, prec), 0.0};

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    bnb.search(std::move(root));
    return bnb.finish();
  }

  // Breadth-first frontier, split across workers.
  std::deque<SearchNode> frontier;
  frontier.push_back(std::move(root));
  while (!frontier.empty() && frontier.size() < 4 * threads && !bnb.complete(frontier.front())) {
    SearchNode node = std::move(frontier.front());
    frontier.pop_front();
    for (SearchNode& child : bnb.expand(node)) frontier.push_back(std::move(child));
  }
  std::vector<SearchNode> work(std::make_move_iterator(frontier.begin()),
                               std::make_move_iterator(frontier.end()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::mutex error_mutex;
  std::exception_ptr error;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < work.size();) bnb.search(work[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return bnb.finish();
}

RealScalar height_bound(const RotationVector& alpha, const Word& word, HeightRegime regime,
                        const ConstantsConfig& consts, const PrecisionPolicy& policy) {
  const int prec = alpha[0].precision_bits();
  if (word.empty()) return consts.c_prime;
  BrjunoVariant variant = regime == HeightRegime::Log ? BrjunoVariant::B : BrjunoVariant::BPrime;
  BrjunoSum sum = brjuno_partial(alpha, word, variant, policy);
  RealScalar products = RealScalar::integer(0, prec);
  for (const auto& t : sum.terms) products = products + t.product;
  RealScalar total = sum.value / (RealScalar::integer(2, prec) * RealScalar::pi(prec));
  if (regime == HeightRegime::Log) total = total + consts.c_univ * products;
  return total + consts.c_prime;
}

RealScalar siegel_radius_bound(const RealScalar& b_value, const ConstantsConfig& consts,
                               const PrecisionPolicy& policy) {
  if (certified_sign(b_value, policy) < 0) {
    throw Error(ErrorKind::DomainError, "Brjuno value must be nonnegative");
  }
  const int prec = b_value.precision_bits();
  RealScalar exponent = RealScalar::integer(-2, prec) * RealScalar::pi(prec) * b_value;
  return consts.c_radius * exp(exponent);
}

}  // namespace siegel
