#pragma once

#include <cstdint>
#include <memory>

#include "relaynet/bit_vector.hpp"
#include "relaynet/ensemble.hpp"
#include "relaynet/sparse_matrix.hpp"

namespace relaynet {

// Composite downlink code [H1 | H2 | H0] plus the two source codes. H0 is
// square and full rank; H1 and H2 are individually fully peelable when all
// of their columns are erased.
class RelayCodebook {
public:
    RelayCodebook(SparseBinaryMatrix H, std::size_t n, double r1, double r2,
                  SparseBinaryMatrix Hs1, SparseBinaryMatrix Hs2);

    std::size_t block_length() const { return n_; }
    double rate1() const { return r1_; }
    double rate2() const { return r2_; }
    std::size_t k1() const { return k1_; }  // columns of H1
    std::size_t k2() const { return k2_; }

    const SparseBinaryMatrix& H() const { return H_; }     // n x (k1+k2+n)
    const SparseBinaryMatrix& H1() const { return H1_; }
    const SparseBinaryMatrix& H2() const { return H2_; }
    const SparseBinaryMatrix& H0() const { return H0_; }
    const SparseBinaryMatrix& Hs(int node) const;          // node 0 or 1
    const Gf2Solver& solver() const { return *solver_; }

private:
    std::size_t n_, k1_, k2_;
    double r1_, r2_;
    SparseBinaryMatrix H_, H1_, H2_, H0_, Hs1_, Hs2_;
    std::shared_ptr<const Gf2Solver> solver_;
};

// PEG-constructs the composite downlink code and the two source codes, then
// verifies the constructibility constraints, locally resampling on failure:
// rank-completion of H0 and stopping-set removal for H1/H2, up to 100
// retries each before a construction error is thrown.
RelayCodebook build_relay_codebook(const MultiEdgeEnsemble& ens_down,
                                   const MultiEdgeEnsemble& ens_src, std::size_t n, double r1,
                                   double r2, uint64_t seed);

// B^l = W^l Hs^T: syndrome compression of a source block.
BitVector syndrome_compress(const SparseBinaryMatrix& Hs, const BitVector& w);

// X0 with B1 H1^T xor B2 H2^T xor X0 H0^T = 0.
BitVector relay_encode(const RelayCodebook& cb, const BitVector& b1, const BitVector& b2);

} // namespace relaynet
