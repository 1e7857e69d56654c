#include "posthoc/decomposition.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "posthoc/errors.hpp"

namespace posthoc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t regime_index(Regime r) { return r == Regime::a_priori ? 0 : 1; }
std::size_t type_index(TheoryType t) { return t == TheoryType::good ? 0 : 1; }

std::string cell_name(Regime r, TheoryType t) {
  return std::string("(") + to_string(r) + ", " + to_string(t) + ")";
}

}  // namespace

void CellStats::add(const TrialRecord& record) {
  ++n_trials;
  if (!record.published) return;
  ++n_published;
  sum_mu += record.mu_star;
  sum_mu_sq += record.mu_star * record.mu_star;
  sum_mu_hat += record.mu_hat_star;
  sum_mu_hat_sq += record.mu_hat_star * record.mu_hat_star;
}

void CellStats::merge(const CellStats& other) {
  n_trials += other.n_trials;
  n_published += other.n_published;
  sum_mu += other.sum_mu;
  sum_mu_sq += other.sum_mu_sq;
  sum_mu_hat += other.sum_mu_hat;
  sum_mu_hat_sq += other.sum_mu_hat_sq;
}

double CellStats::mean_mu() const {
  if (n_published < 1) throw InsufficientDataError("mean over an empty cell");
  return sum_mu / static_cast<double>(n_published);
}

double CellStats::mean_mu_hat() const {
  if (n_published < 1) throw InsufficientDataError("mean over an empty cell");
  return sum_mu_hat / static_cast<double>(n_published);
}

double CellStats::sample_var_mu() const {
  if (n_published < 2) return 0.0;
  const double n = static_cast<double>(n_published);
  const double centered = sum_mu_sq - sum_mu * sum_mu / n;
  return centered > 0.0 ? centered / (n - 1.0) : 0.0;
}

double CellStats::se_mean_mu() const {
  if (n_published < 2) return 0.0;
  return std::sqrt(sample_var_mu() / static_cast<double>(n_published));
}

CellStats& TrialAccumulator::cell(Regime regime, TheoryType type) {
  return cells[regime_index(regime)][type_index(type)];
}

const CellStats& TrialAccumulator::cell(Regime regime, TheoryType type) const {
  return cells[regime_index(regime)][type_index(type)];
}

void TrialAccumulator::add(const TrialRecord& record) {
  cell(record.regime, record.theory_type).add(record);
}

void TrialAccumulator::add_pair(const PairedTrial& pair) {
  add(pair.a_priori);
  add(pair.post_hoc);
  ++n_pairs;
}

void TrialAccumulator::merge(const TrialAccumulator& other) {
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t t = 0; t < 2; ++t) cells[r][t].merge(other.cells[r][t]);
  }
  n_pairs += other.n_pairs;
}

const ConditionalCell& DecompositionReport::cell(Regime regime, TheoryType type) const {
  return cells[regime_index(regime) * 2 + type_index(type)];
}

DecompositionReport estimate_report(const TrialAccumulator& acc) {
  const CellStats& og = acc.cell(Regime::a_priori, TheoryType::good);
  const CellStats& ob = acc.cell(Regime::a_priori, TheoryType::bad);
  const CellStats& dg = acc.cell(Regime::post_hoc, TheoryType::good);
  const CellStats& db = acc.cell(Regime::post_hoc, TheoryType::bad);

  const bool good_present = og.n_trials + dg.n_trials > 0;
  const bool bad_present = ob.n_trials + db.n_trials > 0;
  if (!good_present && !bad_present) {
    throw PreconditionError("no trials to decompose");
  }

  const auto require_published = [](const CellStats& c, Regime r, TheoryType t) {
    if (c.n_published < 1) {
      throw InsufficientDataError("insufficient published trials in cell " +
                                  cell_name(r, t));
    }
  };
  if (good_present) {
    require_published(og, Regime::a_priori, TheoryType::good);
    require_published(dg, Regime::post_hoc, TheoryType::good);
  }
  if (bad_present) {
    require_published(ob, Regime::a_priori, TheoryType::bad);
    require_published(db, Regime::post_hoc, TheoryType::bad);
  }

  DecompositionReport rep;
  const auto fill_cell = [](ConditionalCell& out, const CellStats& in, Regime r,
                            TheoryType t) {
    out.regime = r;
    out.theory_type = t;
    out.n_trials = in.n_trials;
    out.n_published = in.n_published;
    out.defined = in.n_published >= 1;
    out.mean_mu = out.defined ? in.mean_mu() : kNaN;
    out.mean_mu_hat = out.defined ? in.mean_mu_hat() : kNaN;
    out.se_mean_mu = out.defined ? in.se_mean_mu() : kNaN;
  };
  fill_cell(rep.cells[0], og, Regime::a_priori, TheoryType::good);
  fill_cell(rep.cells[1], ob, Regime::a_priori, TheoryType::bad);
  fill_cell(rep.cells[2], dg, Regime::post_hoc, TheoryType::good);
  fill_cell(rep.cells[3], db, Regime::post_hoc, TheoryType::bad);

  rep.n_published_O = og.n_published + ob.n_published;
  rep.n_published_D = dg.n_published + db.n_published;
  const double n_o = static_cast<double>(rep.n_published_O);
  const double n_d = static_cast<double>(rep.n_published_D);
  const double p_go = static_cast<double>(og.n_published) / n_o;
  const double p_gd = static_cast<double>(dg.n_published) / n_d;
  rep.p_good_given_O = p_go;
  rep.p_good_given_D = p_gd;

  rep.single_type = !(good_present && bad_present);
  if (rep.single_type) {
    rep.represented_type = good_present ? TheoryType::good : TheoryType::bad;
  }

  // Regime means via the guarded mixture so the decomposition identity is
  // exact arithmetic on the same numbers (absent types contribute nothing
  // rather than 0 * NaN).
  const auto mixture = [](double p_good, const CellStats& g, const CellStats& b) {
    double total = 0.0;
    if (p_good > 0.0) total += p_good * g.mean_mu();
    if (p_good < 1.0) total += (1.0 - p_good) * b.mean_mu();
    return total;
  };
  rep.mean_mu_O = mixture(p_go, og, ob);
  rep.mean_mu_D = mixture(p_gd, dg, db);

  if (rep.single_type) {
    rep.darwinian_learning = 0.0;
    const CellStats& to = good_present ? og : ob;
    const CellStats& td = good_present ? dg : db;
    rep.statistical_learning = td.mean_mu() - to.mean_mu();
  } else {
    rep.darwinian_learning = (p_go - p_gd) * (og.mean_mu() - ob.mean_mu());
    rep.statistical_learning = p_gd * (dg.mean_mu() - og.mean_mu()) +
                               (1.0 - p_gd) * (db.mean_mu() - ob.mean_mu());
  }
  rep.identity_residual = (rep.mean_mu_O - rep.mean_mu_D) -
                          (rep.darwinian_learning - rep.statistical_learning);

  // Pooled per-regime spread for the regime-mean standard errors.
  const auto pooled_se = [](const CellStats& g, const CellStats& b) {
    const std::int64_t n_i = g.n_published + b.n_published;
    if (n_i < 2) return 0.0;
    const double n = static_cast<double>(n_i);
    const double sum = g.sum_mu + b.sum_mu;
    const double ss = g.sum_mu_sq + b.sum_mu_sq;
    const double centered = ss - sum * sum / n;
    const double var = centered > 0.0 ? centered / (n - 1.0) : 0.0;
    return std::sqrt(var / n);
  };
  StandardErrors& se = rep.standard_errors;
  se.mean_mu_O = pooled_se(og, ob);
  se.mean_mu_D = pooled_se(dg, db);
  se.p_good_given_O = std::sqrt(p_go * (1.0 - p_go) / n_o);
  se.p_good_given_D = std::sqrt(p_gd * (1.0 - p_gd) / n_d);

  const auto var_of_mean = [](const CellStats& c) {
    if (c.n_published < 2) return 0.0;
    return c.sample_var_mu() / static_cast<double>(c.n_published);
  };
  if (rep.single_type) {
    se.darwinian_learning = 0.0;
    const CellStats& to = rep.represented_type == TheoryType::good ? og : ob;
    const CellStats& td = rep.represented_type == TheoryType::good ? dg : db;
    se.statistical_learning = std::sqrt(var_of_mean(to) + var_of_mean(td));
  } else {
    // Delta method treating the batch-level estimates as independent; the
    // O/D pairing makes these slightly conservative.
    const double a = p_go - p_gd;
    const double b = og.mean_mu() - ob.mean_mu();
    const double var_a = se.p_good_given_O * se.p_good_given_O +
                         se.p_good_given_D * se.p_good_given_D;
    const double var_b = var_of_mean(og) + var_of_mean(ob);
    se.darwinian_learning = std::sqrt(b * b * var_a + a * a * var_b);

    const double x = dg.mean_mu() - og.mean_mu();
    const double y = db.mean_mu() - ob.mean_mu();
    const double var_x = var_of_mean(dg) + var_of_mean(og);
    const double var_y = var_of_mean(db) + var_of_mean(ob);
    const double var_pgd = se.p_good_given_D * se.p_good_given_D;
    se.statistical_learning = std::sqrt((x - y) * (x - y) * var_pgd +
                                        p_gd * p_gd * var_x +
                                        (1.0 - p_gd) * (1.0 - p_gd) * var_y);
  }

  rep.improvement = improvement_ratio(rep);
  if (rep.improvement.defined) {
    const double eo = rep.mean_mu_O;
    const double ed = rep.mean_mu_D;
    const double var_eo = se.mean_mu_O * se.mean_mu_O;
    const double var_ed = se.mean_mu_D * se.mean_mu_D;
    se.improvement = std::sqrt(var_ed / (eo * eo) +
                               (ed * ed / (eo * eo * eo * eo)) * var_eo);
  } else {
    se.improvement = kNaN;
  }
  return rep;
}

DecompositionReport estimate_report(std::span<const TrialRecord> trials_O,
                                    std::span<const TrialRecord> trials_D) {
  TrialAccumulator acc;
  for (const TrialRecord& r : trials_O) {
    if (r.regime != Regime::a_priori) {
      throw PreconditionError("a-priori batch contains a post-hoc record");
    }
    acc.add(r);
  }
  for (const TrialRecord& r : trials_D) {
    if (r.regime != Regime::post_hoc) {
      throw PreconditionError("post-hoc batch contains an a-priori record");
    }
    acc.add(r);
  }
  return estimate_report(acc);
}

double check_identity(const DecompositionReport& report) {
  const auto need = [&](TheoryType t) {
    if (!report.cell(Regime::a_priori, t).defined ||
        !report.cell(Regime::post_hoc, t).defined) {
      throw PreconditionError(std::string("identity check needs defined cells for the ") +
                              to_string(t) + " type");
    }
  };
  if (report.single_type) {
    need(report.represented_type);
  } else {
    need(TheoryType::good);
    need(TheoryType::bad);
  }
  return (report.mean_mu_O - report.mean_mu_D) -
         (report.darwinian_learning - report.statistical_learning);
}

ImprovementValue improvement_ratio(const DecompositionReport& report) {
  ImprovementValue v;
  v.raw_difference = report.mean_mu_D - report.mean_mu_O;
  if (report.mean_mu_O > 0.0) {
    v.defined = true;
    v.ratio = report.mean_mu_D / report.mean_mu_O - 1.0;
  }
  return v;
}

}  // namespace posthoc
