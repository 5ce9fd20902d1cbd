String s1 = builder.toString();
assertEquals(7, v1);
int v3 = 28;
obj.method4();
obj.method5();
assertEquals(9, v5);
String s7 = builder.toString();
assertEquals(5, v7);
values.add(99);
obj.method10();
