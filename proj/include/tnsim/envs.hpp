#pragma once

// Environment tensors for sweep algorithms. A left environment at site i
// contracts everything strictly left of i into a (bra bond, MPO bond,
// ket bond) tensor; right environments mirror it. Effective operators for
// zero-, one- and two-site blocks are applied matrix-free.

#include "tnsim/mpo.hpp"
#include "tnsim/mps.hpp"

namespace tnsim {

inline DenseTensor env_boundary() {
  DenseTensor e({1, 1, 1});
  e.at({0, 0, 0}) = 1.0;
  return e;
}

inline DenseTensor left_env_step(const DenseTensor& env, const DenseTensor& a,
                                 const DenseTensor& w) {
  DenseTensor t1 = contract(env, {0}, a.conjugated(), {0});  // (w,ket,out,bra')
  DenseTensor t2 = contract(t1, {0, 2}, w, {0, 1});          // (ket,bra',in,wr)
  return contract(t2, {0, 2}, a, {0, 1});                    // (bra',wr,ket')
}

inline DenseTensor right_env_step(const DenseTensor& env, const DenseTensor& a,
                                  const DenseTensor& w) {
  DenseTensor t1 = contract(a.conjugated(), {2}, env, {0});  // (bra,out,w,ket)
  DenseTensor t2 = contract(t1, {1, 2}, w, {1, 3});          // (bra,ket,wl,in)
  return contract(t2, {1, 3}, a, {2, 1});                    // (bra,wl,ket)
}

// H_eff on a one-site tensor (a, d, b), given surrounding environments.
inline DenseTensor apply_one_site(const DenseTensor& lenv,
                                  const DenseTensor& w,
                                  const DenseTensor& renv,
                                  const DenseTensor& m) {
  DenseTensor t1 = contract(lenv, {2}, m, {0});      // (bra, w, in, ar)
  DenseTensor t2 = contract(t1, {1, 2}, w, {0, 2});  // (bra, ar, out, wr)
  return contract(t2, {1, 3}, renv, {2, 1});         // (bra, out, bra_r)
}

// H_eff on a two-site tensor (a, d1, d2, b).
inline DenseTensor apply_two_site(const DenseTensor& lenv,
                                  const DenseTensor& w1, const DenseTensor& w2,
                                  const DenseTensor& renv,
                                  const DenseTensor& m) {
  DenseTensor t1 = contract(lenv, {2}, m, {0});       // (bra, w, in1, in2, b)
  DenseTensor t2 = contract(t1, {1, 2}, w1, {0, 2});  // (bra, in2, b, out1, w')
  DenseTensor t3 = contract(t2, {4, 1}, w2, {0, 2});  // (bra, b, out1, out2, w'')
  return contract(t3, {1, 4}, renv, {2, 1});          // (bra, out1, out2, bra_r)
}

// H_eff on a bond matrix (a, b) sitting between two environments.
inline DenseTensor apply_zero_site(const DenseTensor& lenv,
                                   const DenseTensor& renv,
                                   const DenseTensor& c) {
  DenseTensor t1 = contract(lenv, {2}, c, {0});   // (bra, w, b)
  return contract(t1, {1, 2}, renv, {1, 2});      // (bra, bra_r)
}

}  // namespace tnsim
