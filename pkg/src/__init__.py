# dglift: exact lifting of DG modules along A -> K(t) tensor A
