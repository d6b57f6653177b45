#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "edrc/certificates.hpp"
#include "edrc/ring.hpp"

namespace edrc::cech {

using certs::Certificate;
using poly::MultiPoly;
using ring::AffineRingPtr;
using ring::DiffForm;
using ring::IndexTuple;

// Principal-open cover U_i = X \ Z(g_i) with a stored certificate that the
// g_i have no common zero on X. Certificates for powers g_i^s are cached.
class Cover {
  public:
    Cover(AffineRingPtr ring, std::vector<MultiPoly> divisors, BigInt degree_D, int dim_m,
          int certificate_cap);

    const AffineRingPtr& ring() const { return ring_; }
    const std::vector<MultiPoly>& divisors() const { return divisors_; }
    std::size_t size() const { return divisors_.size(); }  // t+1
    const BigInt& degree() const { return degree_D_; }
    int dim() const { return dim_m_; }
    int max_divisor_degree() const { return d1_; }

    MultiPoly divisor_product(const IndexTuple& idx) const;
    // Cofactors h_i with sum h_i g_i^s = 1 mod I(X); cap from the 2D(s d1)^m rule.
    const Certificate& power_certificate(int s) const;
    BigInt preimage_degree_shift(int s) const;  // N = 2 D (s d1)^m

  private:
    AffineRingPtr ring_;
    std::vector<MultiPoly> divisors_;
    BigInt degree_D_;
    int dim_m_;
    int d1_;
    mutable std::mutex mu_;
    mutable std::map<int, Certificate> power_certs_;
};

using CoverPtr = std::shared_ptr<const Cover>;

// Family of p-forms indexed by increasing (q+1)-tuples of cover indices; the
// entry at (i0..iq) lives over the divisor g_i0 * ... * g_iq.
class CechCochain {
  public:
    CechCochain(CoverPtr cover, int level_q, int form_p)
        : cover_(std::move(cover)), q_(level_q), p_(form_p) {}

    const CoverPtr& cover() const { return cover_; }
    int level_q() const { return q_; }
    int form_p() const { return p_; }
    bool is_zero() const;
    const std::map<IndexTuple, DiffForm>& entries() const { return entries_; }

    void add_entry(const IndexTuple& idx, const DiffForm& w);
    DiffForm entry(const IndexTuple& idx) const;  // zero form when absent

    CechCochain plus(const CechCochain& o) const;
    CechCochain minus(const CechCochain& o) const;
    CechCochain negated() const;
    CechCochain scaled(const Scalar& c) const;
    int max_order() const;
    int max_degree_stamp() const;

  private:
    CoverPtr cover_;
    int q_, p_;
    std::map<IndexTuple, DiffForm> entries_;
};

// alternating sum of restrictions
CechCochain cech_d(const CechCochain& c);
// exterior derivative applied entry-wise
CechCochain entrywise_d(const CechCochain& c);

// Preimage of a closed cochain under the Cech differential: eta with
// cech_d(eta) = w, assembled from the power certificate at order s.
// Both the preimage identity and the stamp growth (s, d + N) are checked.
CechCochain cocycle_preimage(const CechCochain& w, int s);

// Element of the total complex: cells[q] holds the (p,q) component, p = level - q.
class TotalCochain {
  public:
    TotalCochain(CoverPtr cover, int level) : cover_(std::move(cover)), level_(level) {}

    const CoverPtr& cover() const { return cover_; }
    int level() const { return level_; }
    bool is_zero() const;
    const std::map<int, CechCochain>& cells() const { return cells_; }
    void add_cell(const CechCochain& c);
    CechCochain cell(int q) const;

    TotalCochain plus(const TotalCochain& o) const;
    TotalCochain minus(const TotalCochain& o) const;

  private:
    CoverPtr cover_;
    int level_;
    std::map<int, CechCochain> cells_;
};

TotalCochain total_d(const TotalCochain& c);

// embed a global form as the bottom-row cochain (restrictions to each U_i)
TotalCochain embed_global(const CoverPtr& cover, const DiffForm& alpha);

struct ZigzagResult {
    DiffForm alpha;                      // global closed form over divisor 1
    std::vector<TotalCochain> corrections;  // chain with c - embed(alpha) = sum d_tot(corrections)
};

// Clears the top Cech row step by step and glues the bottom row to one global
// form. Requires total_d(c) = 0; every intermediate identity is checked.
ZigzagResult zigzag_collapse(const TotalCochain& c);

// numerator coefficients of w at order s, as an order-0 form over divisor 1
DiffForm numerator_form(const DiffForm& w, int s);

}  // namespace edrc::cech
